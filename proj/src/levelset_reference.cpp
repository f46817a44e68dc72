#include "bubblefield/levelset.hpp"

#include "bubblefield/errors.hpp"
#include "levelset_kernels.hpp"

namespace bubblefield::levelset::reference {

LevelSetField step(const LevelSetField& field, const TransportParams& p, double dt) {
    p.validate();
    if (!(dt > 0.0) || dt > cfl_dt(field.grid, p) * (1.0 + 1e-12)) {
        throw Error(ErrorCode::CflViolation, "levelset", "reference step: dt outside (0, cfl_dt]");
    }
    const Grid2D& g = field.grid;
    LevelSetField out(g, field.time + dt);
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            out.u[g.index(i, j)] = kernels::transport_node(field.u.data(), g, i, j, p, dt);
        }
    }
    return out;
}

LevelSetField cd_cylindrical_step(const LevelSetField& field, const CylindricalParams& p, double dt) {
    const Grid2D& g = field.grid;
    if (!(g.ax > 0.0)) throw Error(ErrorCode::InvalidArgument, "levelset", "radial origin must be > 0");
    if (!(dt > 0.0) || dt > cd_cfl_dt(g, p) * (1.0 + 1e-12)) {
        throw Error(ErrorCode::CflViolation, "levelset", "reference cylindrical step: dt outside (0, bound]");
    }
    LevelSetField out(g, field.time + dt);
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            out.u[g.index(i, j)] = kernels::cylindrical_node(field.u.data(), g, i, j, p, dt);
        }
    }
    return out;
}

}  // namespace bubblefield::levelset::reference
