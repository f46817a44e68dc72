// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include "bubblefield/bvp.hpp"
#include "bubblefield/coupling.hpp"
#include "bubblefield/errors.hpp"
#include "bubblefield/levelset.hpp"
#include "bubblefield/presets.hpp"
#include "bubblefield/runner.hpp"
#include "bubblefield/young_laplace.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <functional>
#include <numbers>
#include <random>
#include <string>

using namespace bubblefield;

namespace {

constexpr double kPi = std::numbers::pi;

int failures = 0;

void report(int n, const char* name, bool ok, const std::string& detail) {
    std::printf("%s [%d] %s: %s\n", ok ? "PASS" : "FAIL", n, name, detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
}

std::string format(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

double seconds(const std::function<void()>& fn) {
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Runs a check and turns an unexpected exception into a FAIL line.
void criterion(int n, const char* name, const std::function<void()>& body) {
    try {
        body();
    } catch (const std::exception& e) {
        report(n, name, false, std::string("threw ") + e.what());
    }
}

double table_error(const std::vector<runner::TableRow>& rows, const std::array<presets::SemiAxes, 10>& ref) {
    double err = 0.0;
    for (std::size_t k = 0; k < ref.size(); ++k) {
        err = std::max(err, std::abs(rows.at(k).a - ref[k].a));
        err = std::max(err, std::abs(rows.at(k).b - ref[k].b));
    }
    return err;
}

std::vector<runner::TableRow> no_field_rows;

void formation_table() {
    std::vector<runner::TableRow> rows;
    const double t = seconds([&] { rows = runner::table(presets::get("exp10")); });
    no_field_rows = rows;
    const double err = table_error(rows, presets::kFormationTable);
    bool trend = true;
    for (std::size_t k = 1; k < rows.size(); ++k) trend = trend && rows[k].a > rows[k - 1].a && rows[k].b < rows[k - 1].b;
    report(1, "ten-bubble formation table", err <= 1e-2 && trend && t < 10.0,
           format("max |error| = %.4f (tol 1e-2), a up / b down: %s, first (a, b) = (%.4f, %.4f), %.2f s", err,
                  trend ? "yes" : "no", rows.front().a, rows.front().b, t));
}

void efield_table() {
    std::vector<runner::TableRow> rows;
    const double t = seconds([&] { rows = runner::table(presets::get("exp-efield")); });
    const double err = table_error(rows, presets::kEfieldTable);
    bool ordered = no_field_rows.size() == rows.size();
    for (std::size_t k = 0; ordered && k < rows.size(); ++k)
        ordered = rows[k].a > no_field_rows[k].a && rows[k].b < no_field_rows[k].b;
    report(2, "E-field formation table", err <= 1e-2 && ordered && t < 10.0,
           format("max |error| = %.4f (tol 1e-2), a_E > a and b_E < b everywhere: %s, first (a, b) = (%.4f, %.4f), "
                  "%.2f s",
                  err, ordered ? "yes" : "no", rows.front().a, rows.front().b, t));
}

double circle_error(std::size_t N) {
    young_laplace::NearFieldParams p;
    p.form = young_laplace::RhsForm::Bond;
    p.beta = 0.0;
    p.a = young_laplace::kAxisFloor;
    const auto prof = young_laplace::solve_profile(p, kPi, N, young_laplace::AngleCondition::start(0.0));
    double err = 0.0;
    for (const auto& s : prof.samples) {
        err = std::max(err, std::abs(s.state.r - std::sin(s.s)));
        err = std::max(err, std::abs(s.state.z - (1.0 - std::cos(s.s))));
    }
    return err;
}

void circle_oracle() {
    const double e1 = circle_error(500), e2 = circle_error(1000), e3 = circle_error(2000);
    const double r1 = e1 / e2, r2 = e2 / e3;
    const bool ok = e3 <= 1e-4 && r1 >= 3.6 && r1 <= 4.4 && r2 >= 3.6 && r2 <= 4.4;
    report(3, "circle oracle", ok, format("error at N=2000 = %.3e, ratios %.3f %.3f", e3, r1, r2));
}

void jacobian_suite() {
    using namespace young_laplace;
    NearFieldParams bond;
    bond.form = RhsForm::Bond;
    bond.beta = -0.8;
    NearFieldParams pressure;
    pressure.delta_p_over_alpha = 1.3;
    NearFieldParams efield;
    efield.form = RhsForm::ElectricField;
    efield.delta_p_over_alpha = 0.4;
    efield.alpha = 0.1;
    efield.rho = 0.1;
    efield.g = 9.81;
    efield.efield = EFieldParams{0.1, 1.0, EFieldForm::Canonical};

    std::mt19937_64 rng(12345);
    std::uniform_real_distribution<double> R(0.1, 3.0), Z(-2.0, 2.0), T(-kPi, kPi);
    const double h = 1e-6;
    double worst = 0.0;
    for (const auto* p : {&bond, &pressure, &efield}) {
        for (int k = 0; k < 100; ++k) {
            const ProfileState s{R(rng), Z(rng), T(rng)};
            const Mat3 J = jacobian(s, *p);
            for (int c = 0; c < 3; ++c) {
                Vec3 up = s.vec(), dn = s.vec();
                up(c) += h;
                dn(c) -= h;
                const Vec3 fd = (rhs(ProfileState::from(up), *p) - rhs(ProfileState::from(dn), *p)) / (2.0 * h);
                worst = std::max(worst, (fd - J.col(c)).cwiseAbs().maxCoeff());
            }
        }
    }
    report(4, "Jacobian vs finite differences", worst <= 1e-6, format("max entry error = %.3e over 300 states", worst));
}

void bvp_suite() {
    using namespace bvp;
    LinearBVP ex;
    ex.dim = 1;
    ex.A = [](double, std::size_t) { return Matrix::Constant(1, 1, 1.0); };
    ex.q = [](double, std::size_t) { return Vector::Zero(1); };
    ex.B_a = Matrix::Constant(1, 1, 1.0);
    ex.B_b = Matrix::Zero(1, 1);
    ex.d = Vector::Constant(1, 1.0);
    auto err = [&](std::size_t N) {
        return std::abs(solve_block_midpoint(ex, Mesh::uniform(0.0, 1.0, N)).values.back()(0) - std::exp(1.0));
    };
    const double e1 = err(250), e2 = err(500), e3 = err(1000);
    const double r1 = e1 / e2, r2 = e2 / e3;

    const Mesh mesh = Mesh::uniform(0.0, 1.0, 1000);
    const auto mid = solve_block_midpoint(ex, mesh);
    const auto shoot = solve_multiple_shooting(ex, mesh);
    double agree = 0.0;
    for (std::size_t i = 0; i < mesh.size(); ++i) agree = std::max(agree, std::abs(mid.values[i](0) - shoot.values[i](0)));

    LinearBVP aff;
    aff.dim = 2;
    aff.A = [](double, std::size_t) {
        Matrix A = Matrix::Zero(2, 2);
        A(0, 1) = 1.0;
        return A;
    };
    aff.q = [](double, std::size_t) { return Vector::Zero(2); };
    aff.B_a = Matrix::Zero(2, 2);
    aff.B_a(0, 0) = 1.0;
    aff.B_b = Matrix::Zero(2, 2);
    aff.B_b(1, 0) = 1.0;
    aff.d = Vector::Zero(2);
    aff.d(1) = 1.0;
    const auto lin = solve_block_midpoint(aff, mesh);
    double affine = 0.0;
    for (std::size_t i = 0; i < mesh.size(); ++i) affine = std::max(affine, std::abs(lin.values[i](0) - mesh[i]));

    const bool ok = e3 <= 1e-5 && r1 >= 3.6 && r1 <= 4.4 && r2 >= 3.6 && r2 <= 4.4 && agree <= 1e-4 && affine <= 1e-12;
    report(5, "BVP solvers", ok,
           format("exp error %.3e (ratios %.3f %.3f), midpoint vs shooting %.3e, affine %.3e", e3, r1, r2, agree,
                  affine));
}

void levelset_oracles() {
    using namespace levelset;
    const Grid2D g = Grid2D::from_extent(100, 200, 0.0, 0.0, 100.0, 200.0);
    auto circle = [&](double cx, double cy, double radius) {
        LevelSetField f(g);
        for (int j = 0; j < g.ny; ++j)
            for (int i = 0; i < g.nx; ++i) f.at(i, j) = std::hypot(g.x(i) - cx, g.y(j) - cy) - radius;
        return f;
    };
    auto neg_area = [](const LevelSetField& f) {
        double n = 0.0;
        for (double v : f.u) n += v < 0.0;
        return n * f.grid.dx * f.grid.dy;
    };

    const auto c0 = circle(50.0, 50.0, 10.0);
    const auto same = advance(c0, {0.0, 0.0, 0.0}, 50.0);
    const bool noop = std::memcmp(same.u.data(), c0.u.data(), c0.u.size() * sizeof(double)) == 0;

    const auto moved = advance(c0, {0.0, 1.0, 0.0}, 100.0);
    const auto k0 = label_components(c0), k1 = label_components(moved);
    double drift = 1e9;
    if (k0.size() == 1 && k1.size() == 1)
        drift = std::max(std::abs(k1[0].centroid.x - k0[0].centroid.x),
                         std::abs(k1[0].centroid.y - k0[0].centroid.y - 100.0));

    const auto f0 = circle(50.0, 100.0, 10.0);
    const auto grown = advance(f0, {0.0, 0.0, 0.1}, 50.0);
    const double rate = (std::sqrt(neg_area(grown) / kPi) - std::sqrt(neg_area(f0) / kPi)) / 50.0;
    const double rate_err = std::abs(rate - 0.1) / 0.1;

    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> U(-1.0, 1.0), V(0.0, 2.0), C(0.05, 1.0);
    const Grid2D small = Grid2D::from_extent(40, 30, 0.0, 0.0, 40.0, 60.0);
    LevelSetField r(small);
    for (auto& v : r.u) v = U(rng);
    bool bounded = true;
    for (int n = 0; n < 1000; ++n) {
        const TransportParams p{V(rng), V(rng), 0.0};
        const auto [lo, hi] = std::minmax_element(r.u.begin(), r.u.end());
        const double mn = *lo, mx = *hi;
        r = step(r, p, C(rng) * cfl_dt(small, p));
        for (double v : r.u) bounded = bounded && v >= mn && v <= mx;
    }

    const bool ok = noop && drift <= 0.5 && rate_err <= 0.1 && bounded;
    report(6, "level-set oracles", ok,
           format("no-op bitwise %s, centroid drift %.3f cells, front speed off by %.1f%%, max principle %s",
                  noop ? "yes" : "no", drift, 100.0 * rate_err, bounded ? "holds" : "violated"));
}

std::vector<coupling::BubbleRecord> records_of(const config::RunConfig& cfg) {
    std::vector<coupling::BubbleRecord> out;
    for (const auto& b : cfg.bubbles) out.push_back({b.id, b.near, b.ellipse, std::nullopt, b.placement, {}, false});
    return out;
}

void coupled_reduction() {
    const auto cfg = presets::get("exp10");
    coupling::CycleOptions opts;
    opts.snapshot_times = cfg.times;
    opts.refresh_every = 0;
    opts.mode = cfg.init_mode;
    auto a = records_of(cfg), b = records_of(cfg);
    const auto sa = coupling::run_coupled_cycle(a, *cfg.grid, cfg.transport, std::nullopt, opts);
    const auto sb = coupling::run_decoupled(b, *cfg.grid, cfg.transport, opts);
    bool same = sa.size() == sb.size() && coupling::format_bubbles_csv(sa) == coupling::format_bubbles_csv(sb);
    for (std::size_t k = 0; same && k < sa.size(); ++k)
        same = levelset::format_snapshot(sa[k].field) == levelset::format_snapshot(sb[k].field);

    const auto dir = std::filesystem::temp_directory_path() / "bubblefield_acceptance_exp10";
    std::filesystem::remove_all(dir);
    std::size_t files = 0;
    const double t = seconds([&] { files = runner::run(cfg, dir).files.size(); });
    std::filesystem::remove_all(dir);
    report(7, "coupled cycle reduces to the decoupled pipeline", same && t < 60.0,
           format("byte-identical: %s over %zu snapshots, full exp10 run %.2f s (%zu files)", same ? "yes" : "no",
                  sa.size(), t, files));
}

void breathing_formulas() {
    using namespace coupling;
    const EFieldParams e{0.1, 1.0};
    const double h = 1e-4;
    auto slope = [&](double th) {
        return (electric_pressure(e, th + h) - electric_pressure(e, th - h)) / (2.0 * h);
    };
    const bool peak = slope(kPi / 2 - 0.01) > 0.0 && slope(kPi / 2 + 0.01) < 0.0 &&
                      electric_pressure(e, kPi / 2) >= electric_pressure(e, kPi / 2 - 0.01) &&
                      electric_pressure(e, kPi / 2) >= electric_pressure(e, kPi / 2 + 0.01);

    OscillationParams op;
    op.r0 = 1.0;
    op.k = 1.0;
    op.p0 = 2.0;
    op.rho = 1.0;
    op.sigma = 3.0;
    const bool zero = breathing_frequency(op, 0.0) == 0.0;

    bool exact = true;
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> U(0.1, 3.0);
    for (int n = 0; n < 1000; ++n) {
        OscillationParams q;
        q.r0 = U(rng);
        q.k = U(rng);
        q.p0 = U(rng);
        q.rho = U(rng);
        q.sigma = U(rng);
        const double pE = 0.5 * U(rng);
        const double p = std::abs(q.p0 - pE);
        const bool imaginary = 3.0 * q.k * p / q.rho < 2.0 * q.sigma / (q.rho * q.r0);
        bool threw = false;
        try {
            breathing_frequency(q, pE);
        } catch (const Error& err) {
            threw = err.code() == ErrorCode::ImaginaryFrequency;
        }
        exact = exact && threw == imaginary;
    }
    report(8, "breathing-mode formulas", peak && zero && exact,
           format("pressure peak at pi/2: %s, zero radicand gives 0: %s, ImaginaryFrequency exactly when expected: %s",
                  peak ? "yes" : "no", zero ? "yes" : "no", exact ? "yes" : "no"));
}

}  // namespace

int main() {
    criterion(1, "ten-bubble formation table", formation_table);
    criterion(2, "E-field formation table", efield_table);
    criterion(3, "circle oracle", circle_oracle);
    criterion(4, "Jacobian vs finite differences", jacobian_suite);
    criterion(5, "BVP solvers", bvp_suite);
    criterion(6, "level-set oracles", levelset_oracles);
    criterion(7, "coupled cycle reduces to the decoupled pipeline", coupled_reduction);
    criterion(8, "breathing-mode formulas", breathing_formulas);
    std::printf("%d of 8 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
