#include "bubblefield/levelset.hpp"

#include "bubblefield/errors.hpp"
#include "levelset_kernels.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace bubblefield::levelset {

namespace {
constexpr const char* kModule = "levelset";

void check_dt(double dt, double limit) {
    if (!(dt > 0.0)) throw Error(ErrorCode::InvalidArgument, kModule, "dt must be > 0");
    if (dt > limit * (1.0 + 1e-12)) {
        std::ostringstream os;
        os << "dt = " << dt << " exceeds the stability bound " << limit << "; subcycle";
        throw Error(ErrorCode::CflViolation, kModule, os.str());
    }
}
}  // namespace

Grid2D Grid2D::from_extent(int nx, int ny, double ax, double ay, double bx, double by) {
    Grid2D g;
    g.nx = nx;
    g.ny = ny;
    g.ax = ax;
    g.ay = ay;
    g.bx = bx;
    g.by = by;
    g.dx = nx > 0 ? (bx - ax) / nx : 0.0;
    g.dy = ny > 0 ? (by - ay) / ny : 0.0;
    g.validate();
    return g;
}

void Grid2D::validate() const {
    if (nx < 3 || ny < 3) throw Error(ErrorCode::InvalidArgument, kModule, "grid needs nx, ny >= 3");
    if (!(dx > 0.0) || !(dy > 0.0) || !std::isfinite(dx) || !std::isfinite(dy)) {
        throw Error(ErrorCode::InvalidArgument, kModule, "grid spacing must be positive");
    }
}

void TransportParams::validate() const {
    if (!(vx >= 0.0) || !(vy >= 0.0) || !(F0 >= 0.0)) {
        throw Error(ErrorCode::InvalidArgument, kModule, "vx, vy and F0 must be >= 0");
    }
}

UpwindDiffs upwind_diffs(const LevelSetField& field, int i, int j) {
    return kernels::diffs(field.u.data(), field.grid, i, j);
}

double godunov_grad_mag(const LevelSetField& field, int i, int j) {
    return kernels::godunov(kernels::diffs(field.u.data(), field.grid, i, j));
}

double cfl_dt(const Grid2D& g, const TransportParams& p) {
    const double rate = p.vx / g.dx + p.vy / g.dy + p.F0 * std::sqrt(1.0 / (g.dx * g.dx) + 1.0 / (g.dy * g.dy));
    return rate > 0.0 ? 0.9 / rate : std::numeric_limits<double>::infinity();
}

void step_into(const LevelSetField& in, LevelSetField& out, const TransportParams& p, double dt) {
    p.validate();
    check_dt(dt, cfl_dt(in.grid, p));
    const Grid2D& g = in.grid;
    out.grid = g;
    out.u.resize(g.size());
    out.time = in.time + dt;
    const double* u = in.u.data();
    double* w = out.u.data();
#pragma omp parallel for schedule(static)
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) w[g.index(i, j)] = kernels::transport_node(u, g, i, j, p, dt);
    }
}

LevelSetField step(const LevelSetField& field, const TransportParams& p, double dt) {
    LevelSetField out;
    step_into(field, out, p, dt);
    return out;
}

std::size_t substeps_for(const Grid2D& grid, const TransportParams& p, double duration) {
    const double limit = cfl_dt(grid, p);
    if (!std::isfinite(limit)) return 1;
    return std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(duration / limit)));
}

LevelSetField advance(const LevelSetField& field, const TransportParams& p, double duration) {
    if (!(duration > 0.0)) throw Error(ErrorCode::InvalidArgument, kModule, "duration must be > 0");
    const std::size_t n = substeps_for(field.grid, p, duration);
    const double dt = duration / static_cast<double>(n);
    LevelSetField a = field, b;
    for (std::size_t k = 0; k < n; ++k) {
        step_into(a, b, p, dt);
        std::swap(a, b);
    }
    a.time = field.time + duration;
    return a;
}

double bubble_quadratic(const EllipseParams& e, double x, double y) {
    const double dx = x - e.center.x;
    const double dy = (y - e.center.y) * e.a / e.b;
    return dx * dx + dy * dy - e.a * e.a;
}

LevelSetField init_bubbles(std::span<const EllipseParams> bubbles, const Grid2D& grid, InitMode mode,
                           std::vector<std::string>* warnings) {
    grid.validate();
    if (bubbles.empty()) throw Error(ErrorCode::EmptyBubbleList, kModule, "no bubbles to place");
    for (const auto& e : bubbles) {
        if (!(e.a > 0.0) || !(e.b > 0.0)) {
            throw Error(ErrorCode::InvalidArgument, kModule, "ellipse semi-axes must be > 0");
        }
    }
    if (warnings != nullptr) {
        for (std::size_t k = 0; k < bubbles.size(); ++k) {
            const auto& e = bubbles[k];
            if (e.center.x - e.a < grid.ax || e.center.x + e.a > grid.bx || e.center.y - e.b < grid.ay ||
                e.center.y + e.b > grid.by) {
                warnings->push_back("bubble " + std::to_string(k) + " extends outside the grid");
            }
            for (std::size_t m = k + 1; m < bubbles.size(); ++m) {
                const auto& f = bubbles[m];
                if (std::abs(e.center.x - f.center.x) < e.a + f.a &&
                    std::abs(e.center.y - f.center.y) < e.b + f.b) {
                    warnings->push_back("bubbles " + std::to_string(k) + " and " + std::to_string(m) +
                                        " overlap");
                }
            }
        }
    }

    LevelSetField field(grid);
#pragma omp parallel for schedule(static)
    for (int j = 0; j < grid.ny; ++j) {
        const double y = grid.y(j);
        for (int i = 0; i < grid.nx; ++i) {
            const double x = grid.x(i);
            double v;
            if (mode == InitMode::Union) {
                v = std::numeric_limits<double>::infinity();
                for (const auto& e : bubbles) v = std::min(v, bubble_quadratic(e, x, y));
            } else {
                std::size_t best = 0;
                for (std::size_t k = 1; k < bubbles.size(); ++k) {
                    if (std::abs(x - bubbles[k].center.x) < std::abs(x - bubbles[best].center.x)) best = k;
                }
                v = bubble_quadratic(bubbles[best], x, y);
            }
            field.at(i, j) = v;
        }
    }
    return field;
}

GradientBand zero_band_gradient(const LevelSetField& f) {
    const Grid2D& g = f.grid;
    GradientBand band{std::numeric_limits<double>::infinity(), 0.0, 0};
    for (int j = 1; j + 1 < g.ny; ++j) {
        for (int i = 1; i + 1 < g.nx; ++i) {
            const double c = f.at(i, j);
            const bool crosses = (c < 0.0) != (f.at(i + 1, j) < 0.0) || (c < 0.0) != (f.at(i - 1, j) < 0.0) ||
                                 (c < 0.0) != (f.at(i, j + 1) < 0.0) || (c < 0.0) != (f.at(i, j - 1) < 0.0);
            if (!crosses) continue;
            const double gx = (f.at(i + 1, j) - f.at(i - 1, j)) / (2.0 * g.dx);
            const double gy = (f.at(i, j + 1) - f.at(i, j - 1)) / (2.0 * g.dy);
            const double m = std::hypot(gx, gy);
            band.min = std::min(band.min, m);
            band.max = std::max(band.max, m);
            ++band.nodes;
        }
    }
    if (band.nodes == 0) band.min = 0.0;
    return band;
}

}  // namespace bubblefield::levelset
