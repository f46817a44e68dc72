#include "bubblefield/errors.hpp"
#include "bubblefield/levelset.hpp"
#include "levelset_kernels.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace bubblefield::levelset {

double cd_cfl_dt(const Grid2D& g, const CylindricalParams& p) {
    const double rate = std::abs(p.v) / g.dy + 2.0 * p.D_L / (g.dy * g.dy) + 2.0 * p.D_t / (g.dx * g.dx);
    return rate > 0.0 ? 0.9 / rate : std::numeric_limits<double>::infinity();
}

LevelSetField cd_cylindrical_step(const LevelSetField& field, const CylindricalParams& p, double dt) {
    const Grid2D& g = field.grid;
    if (!(g.ax > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "levelset", "radial nodes must be off the axis (ax > 0)");
    }
    if (!(p.D_L >= 0.0) || !(p.D_t >= 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "levelset", "diffusion coefficients must be >= 0");
    }
    if (!(dt > 0.0)) throw Error(ErrorCode::InvalidArgument, "levelset", "dt must be > 0");
    const double limit = cd_cfl_dt(g, p);
    if (dt > limit * (1.0 + 1e-12)) {
        std::ostringstream os;
        os << "dt = " << dt << " exceeds the explicit bound " << limit;
        throw Error(ErrorCode::CflViolation, "levelset", os.str());
    }
    LevelSetField out(g, field.time + dt);
    const double* u = field.u.data();
#pragma omp parallel for schedule(static)
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) out.u[g.index(i, j)] = kernels::cylindrical_node(u, g, i, j, p, dt);
    }
    return out;
}

double cylindrical_mass(const LevelSetField& f) {
    const Grid2D& g = f.grid;
    double m = 0.0;
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) m += f.at(i, j) * g.x(i);
    }
    return m * g.dx * g.dy;
}

}  // namespace bubblefield::levelset
