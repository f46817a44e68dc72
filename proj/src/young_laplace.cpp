#include "bubblefield/young_laplace.hpp"

#include "bubblefield/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace bubblefield::young_laplace {

namespace {

constexpr const char* kModule = "young_laplace";

// Everything in G except the -sin(theta)/r curvature term, with its partials.
struct Drive {
    double value;
    double d_z;
    double d_theta;
};

Drive drive(const ProfileState& s, const NearFieldParams& p) {
    switch (p.form) {
        case RhsForm::Bond:
            return {2.0 + p.beta * s.z, p.beta, 0.0};
        case RhsForm::Pressure:
            return {p.delta_p_over_alpha, 0.0, 0.0};
        case RhsForm::ElectricField: {
            const EFieldParams& e = *p.efield;
            double pe = 0.0, dpe = 0.0;
            if (e.form == EFieldForm::Canonical) {
                const double c = 9.0 / 8.0 * e.epsilon * e.E0_sq;
                pe = c * std::sin(s.theta) * std::sin(s.theta);
                dpe = 2.0 * c * std::sin(s.theta) * std::cos(s.theta);
            } else {
                const double c = 9.0 / 8.0 * e.E0_sq;
                pe = c * std::sin(s.theta);
                dpe = c * std::cos(s.theta);
            }
            return {p.delta_p_over_alpha + (p.rho * p.g * s.z - pe) / p.alpha, p.rho * p.g / p.alpha,
                    -dpe / p.alpha};
        }
    }
    return {0.0, 0.0, 0.0};
}

void require_off_axis(const ProfileState& s) {
    if (!(s.r >= kAxisFloor)) {
        throw Error(ErrorCode::AxisSingularity, kModule,
                    "r = " + std::to_string(s.r) + " is below the axis floor; use the regularized form");
    }
}

Vec3 rhs_impl(const ProfileState& s, const NearFieldParams& p, bool on_axis) {
    const Drive dr = drive(s, p);
    const double G = on_axis ? 0.5 * dr.value : dr.value - std::sin(s.theta) / s.r;
    return {std::cos(s.theta), std::sin(s.theta), G};
}

Mat3 jacobian_impl(const ProfileState& s, const NearFieldParams& p, bool on_axis) {
    const Drive dr = drive(s, p);
    const double st = std::sin(s.theta), ct = std::cos(s.theta);
    Mat3 J = Mat3::Zero();
    J(0, 2) = -st;
    J(1, 2) = ct;
    if (on_axis) {
        J(2, 1) = 0.5 * dr.d_z;
        J(2, 2) = 0.5 * dr.d_theta;
    } else {
        J(2, 0) = st / (s.r * s.r);
        J(2, 1) = dr.d_z;
        J(2, 2) = dr.d_theta - ct / s.r;
    }
    return J;
}

using Path = std::vector<Vec3>;

Path resample(const BubbleProfile& prof, const bvp::Mesh& mesh, double L) {
    Path out(mesh.size());
    const auto& smp = prof.samples;
    const double scale = prof.L / L;
    std::size_t k = 0;
    for (std::size_t i = 0; i < mesh.size(); ++i) {
        const double s = std::clamp(mesh[i] * scale, smp.front().s, smp.back().s);
        while (k + 2 < smp.size() && smp[k + 1].s < s) ++k;
        const double s0 = smp[k].s, s1 = smp[k + 1].s;
        const double w = s1 > s0 ? (s - s0) / (s1 - s0) : 0.0;
        out[i] = (1.0 - w) * smp[k].state.vec() + w * smp[k + 1].state.vec();
    }
    return out;
}

// Constant-curvature arc from (a, 0, theta0) turning to theta_end at s = L.
Path arc_guess(const bvp::Mesh& mesh, double a, double theta0, double theta_end, double L) {
    Path out(mesh.size());
    const double kappa = (theta_end - theta0) / L;
    for (std::size_t i = 0; i < mesh.size(); ++i) {
        const double s = mesh[i];
        const double th = theta0 + kappa * s;
        double r, z;
        if (std::abs(kappa) < 1e-12) {
            r = a + s * std::cos(theta0);
            z = s * std::sin(theta0);
        } else {
            r = a + (std::sin(th) - std::sin(theta0)) / kappa;
            z = -(std::cos(th) - std::cos(theta0)) / kappa;
        }
        out[i] = {r, z, th};
    }
    return out;
}

Path march_guess(const bvp::Mesh& mesh, const NearFieldParams& p, double theta0) {
    Path out(mesh.size());
    out[0] = {p.a, 0.0, theta0};
    auto f = [&](const Vec3& y) { return rhs_regularized(ProfileState::from(y), p); };
    for (std::size_t i = 0; i + 1 < mesh.size(); ++i) {
        const double h = mesh.step(i);
        const Vec3& y = out[i];
        const Vec3 k1 = f(y);
        const Vec3 k2 = f(y + 0.5 * h * k1);
        const Vec3 k3 = f(y + 0.5 * h * k2);
        const Vec3 k4 = f(y + h * k3);
        out[i + 1] = y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return out;
}

bool all_finite(const Path& y) {
    return std::all_of(y.begin(), y.end(), [](const Vec3& v) { return v.allFinite(); });
}

double residual_norm(const Path& y, const bvp::Mesh& mesh, const NearFieldParams& p,
                     const AngleCondition& angle) {
    double res = 0.0;
    for (std::size_t i = 0; i + 1 < y.size(); ++i) {
        const Vec3 mid = 0.5 * (y[i] + y[i + 1]);
        const Vec3 row = (y[i + 1] - y[i]) / mesh.step(i) - rhs_regularized(ProfileState::from(mid), p);
        res = std::max(res, row.cwiseAbs().maxCoeff());
    }
    res = std::max(res, std::abs(y.front()(0) - p.a));
    res = std::max(res, std::abs(y.front()(1)));
    const double th = angle.where == AngleCondition::Where::Start ? y.front()(2) : y.back()(2);
    res = std::max(res, std::abs(th - angle.theta));
    return std::isfinite(res) ? res : std::numeric_limits<double>::infinity();
}

}  // namespace

std::string_view to_string(RhsForm form) noexcept {
    switch (form) {
        case RhsForm::Bond: return "bond";
        case RhsForm::Pressure: return "pressure";
        case RhsForm::ElectricField: return "efield";
    }
    return "unknown";
}

void NearFieldParams::validate() const {
    if (!(a > 0.0)) throw Error(ErrorCode::InvalidArgument, kModule, "a must be > 0");
    if (form == RhsForm::ElectricField) {
        if (!efield) throw Error(ErrorCode::InvalidArgument, kModule, "E-field form needs efield parameters");
        if (!(alpha > 0.0)) throw Error(ErrorCode::InvalidArgument, kModule, "alpha must be > 0");
        if (!(efield->E0_sq >= 0.0)) throw Error(ErrorCode::InvalidArgument, kModule, "E0_sq must be >= 0");
        if (!(efield->epsilon > 0.0)) throw Error(ErrorCode::InvalidArgument, kModule, "epsilon must be > 0");
    }
}

double field_pressure(const EFieldParams& e, double theta) {
    if (e.form == EFieldForm::Canonical) {
        return 9.0 / 8.0 * e.epsilon * e.E0_sq * std::sin(theta) * std::sin(theta);
    }
    return 9.0 / 8.0 * e.E0_sq * std::sin(theta);
}

Vec3 rhs(const ProfileState& state, const NearFieldParams& p) {
    require_off_axis(state);
    return rhs_impl(state, p, false);
}

Mat3 jacobian(const ProfileState& state, const NearFieldParams& p) {
    require_off_axis(state);
    return jacobian_impl(state, p, false);
}

Vec3 rhs_regularized(const ProfileState& state, const NearFieldParams& p) {
    return rhs_impl(state, p, !(state.r >= kAxisFloor));
}

Mat3 jacobian_regularized(const ProfileState& state, const NearFieldParams& p) {
    return jacobian_impl(state, p, !(state.r >= kAxisFloor));
}

std::size_t intervals_for(double L, double ds) {
    return std::max<std::size_t>(10, static_cast<std::size_t>(std::llround(L / ds)));
}

BubbleProfile solve_profile(const NearFieldParams& p, double L, std::size_t intervals,
                            const AngleCondition& angle, const NewtonOptions& opts,
                            const BubbleProfile* guess) {
    p.validate();
    if (!(L > 0.0)) throw Error(ErrorCode::InvalidArgument, kModule, "L must be > 0");
    if (intervals < 10) throw Error(ErrorCode::MeshTooCoarse, kModule, "need at least 10 intervals");

    const bvp::Mesh mesh = bvp::Mesh::uniform(0.0, L, intervals);
    const bool at_start = angle.where == AngleCondition::Where::Start;

    Path y;
    if (guess != nullptr && guess->samples.size() >= 2) {
        y = resample(*guess, mesh, L);
    } else if (at_start) {
        y = march_guess(mesh, p, angle.theta);
    }
    if (y.empty() || !all_finite(y)) {
        const double theta0 = at_start ? angle.theta : (p.a < 1e-6 * L ? 0.0 : std::numbers::pi / 2);
        const double theta_end = at_start ? angle.theta + std::numbers::pi / 2 : angle.theta;
        y = arc_guess(mesh, p.a, theta0, theta_end, L);
    }

    bvp::LinearBVP lin;
    lin.dim = 3;
    lin.B_a = bvp::Matrix::Zero(3, 3);
    lin.B_b = bvp::Matrix::Zero(3, 3);
    lin.B_a(0, 0) = 1.0;
    lin.B_a(1, 1) = 1.0;
    (at_start ? lin.B_a : lin.B_b)(2, 2) = 1.0;
    lin.d = bvp::Vector(3);
    lin.d << p.a, 0.0, angle.theta;

    std::vector<bvp::Matrix> A(intervals);
    std::vector<bvp::Vector> q(intervals);
    lin.A = [&A](double, std::size_t i) { return A[i]; };
    lin.q = [&q](double, std::size_t i) { return q[i]; };

    BubbleProfile out;
    out.L = L;
    out.variant = p.form;

    double res = residual_norm(y, mesh, p, angle);
    for (int it = 0; it < opts.max_iterations; ++it) {
#pragma omp parallel for schedule(static)
        for (std::ptrdiff_t ii = 0; ii < static_cast<std::ptrdiff_t>(intervals); ++ii) {
            const auto i = static_cast<std::size_t>(ii);
            const Vec3 mid = 0.5 * (y[i] + y[i + 1]);
            const ProfileState ms = ProfileState::from(mid);
            const Mat3 J = jacobian_regularized(ms, p);
            A[i] = J;
            q[i] = rhs_regularized(ms, p) - J * mid;
        }

        const bvp::Trajectory next = bvp::solve_block_midpoint(lin, mesh);
        Path delta(y.size());
        double update = 0.0;
        for (std::size_t i = 0; i < y.size(); ++i) {
            delta[i] = next.values[i] - y[i];
            update = std::max(update, delta[i].cwiseAbs().maxCoeff());
        }
        if (!std::isfinite(update)) {
            throw Error(ErrorCode::NewtonDivergence, kModule, "non-finite Newton update");
        }
        out.newton_updates.push_back(update);

        double lambda = 1.0;
        Path trial(y.size());
        double trial_res = res;
        for (int k = 0; k <= opts.max_halvings; ++k) {
            for (std::size_t i = 0; i < y.size(); ++i) trial[i] = y[i] + lambda * delta[i];
            trial_res = residual_norm(trial, mesh, p, angle);
            if (trial_res < res || update <= opts.tolerance) break;
            if (k < opts.max_halvings) lambda *= 0.5;
        }
        y.swap(trial);
        res = trial_res;

        if (update <= opts.tolerance) {
            out.samples.resize(y.size());
            for (std::size_t i = 0; i < y.size(); ++i) out.samples[i] = {mesh[i], ProfileState::from(y[i])};
            return out;
        }
    }
    throw Error(ErrorCode::NewtonDivergence, kModule,
                "no convergence in " + std::to_string(opts.max_iterations) + " iterations at L = " +
                    std::to_string(L));
}

ClosureCriterion ClosureCriterion::radius_at_end(double tol) {
    return {[](const BubbleProfile& b) { return b.samples.back().state.r; }, tol};
}

ClosureCriterion ClosureCriterion::angle_at_end(double theta, double tol) {
    return {[theta](const BubbleProfile& b) { return b.samples.back().state.theta - theta; }, tol};
}

ClosureCriterion ClosureCriterion::always() {
    return {[](const BubbleProfile&) { return 0.0; }, 0.0};
}

ContinuationResult continue_in_L(const NearFieldParams& p, double L0, const ClosureCriterion& stop,
                                 const ContinuationOptions& opts) {
    if (!(L0 > 0.0)) throw Error(ErrorCode::InvalidArgument, kModule, "L0 must be > 0");
    auto solve = [&](double L, const BubbleProfile* g) {
        return solve_profile(p, L, intervals_for(L, opts.ds), opts.angle, opts.newton, g);
    };
    auto closed = [&](double g) { return std::abs(g) <= stop.tolerance; };

    ContinuationResult cur{solve(L0, nullptr), L0, 0};
    double g = stop.residual(cur.profile);
    if (closed(g)) return cur;

    int shrink = 0;
    while (true) {
        const double L_next = cur.L * (1.0 + (opts.growth - 1.0) * std::ldexp(1.0, -shrink));
        if (L_next > opts.max_factor * L0) {
            throw Error(ErrorCode::NoClosure, kModule,
                        "closure not reached before L = " + std::to_string(opts.max_factor * L0));
        }
        BubbleProfile next;
        try {
            next = solve(L_next, &cur.profile);
        } catch (const Error& e) {
            if (e.code() != ErrorCode::NewtonDivergence) throw;
            // No profile this long from here: shorten the step, and give up
            // with the last converged profile once the step is negligible.
            if (++shrink > opts.max_bisections) return cur;
            continue;
        }
        const double g_next = stop.residual(next);
        if (closed(g_next)) return {std::move(next), L_next, cur.steps + 1};

        if ((g < 0.0) != (g_next < 0.0)) {
            // Bracketed: bisect on L.
            double lo = cur.L, hi = L_next, g_lo = g;
            ContinuationResult best{next, L_next, cur.steps + 1};
            double best_g = std::abs(g_next);
            BubbleProfile anchor = cur.profile;
            for (int k = 0; k < opts.max_bisections; ++k) {
                const double mid = 0.5 * (lo + hi);
                BubbleProfile pm = solve(mid, &anchor);
                const double gm = stop.residual(pm);
                ++best.steps;
                if (std::abs(gm) < best_g) {
                    best_g = std::abs(gm);
                    best.profile = pm;
                    best.L = mid;
                }
                if (closed(gm)) return {std::move(pm), mid, best.steps};
                if ((gm < 0.0) == (g_lo < 0.0)) {
                    lo = mid;
                    g_lo = gm;
                    anchor = std::move(pm);
                } else {
                    hi = mid;
                }
            }
            return best;
        }
        cur = {std::move(next), L_next, cur.steps + 1};
        g = g_next;
        shrink = std::max(0, shrink - 1);
    }
}

double bond_number(double rho, double g, double R_t, double sigma) {
    if (sigma == 0.0) throw Error(ErrorCode::ZeroSurfaceTension, kModule, "sigma must be nonzero");
    return -rho * g * R_t * R_t / sigma;
}

}  // namespace bubblefield::young_laplace
