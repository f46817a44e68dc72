#pragma once

// Per-node stencils shared by the OpenMP kernels and their serial references,
// so both paths perform the same floating-point operations.

#include "bubblefield/levelset.hpp"

#include <algorithm>
#include <cmath>

namespace bubblefield::levelset::kernels {

inline UpwindDiffs diffs(const double* u, const Grid2D& g, int i, int j) {
    const double c = u[g.index(i, j)];
    const double w = i > 0 ? u[g.index(i - 1, j)] : c;
    const double e = i + 1 < g.nx ? u[g.index(i + 1, j)] : c;
    const double s = j > 0 ? u[g.index(i, j - 1)] : c;
    const double n = j + 1 < g.ny ? u[g.index(i, j + 1)] : c;
    return {(c - w) / g.dx, (e - c) / g.dx, (c - s) / g.dy, (n - c) / g.dy};
}

inline double godunov(const UpwindDiffs& d) {
    const double a = std::max(d.dxm, 0.0);
    const double b = std::min(d.dxp, 0.0);
    const double c = std::max(d.dym, 0.0);
    const double e = std::min(d.dyp, 0.0);
    return std::sqrt(a * a + b * b + c * c + e * e);
}

inline double transport_node(const double* u, const Grid2D& g, int i, int j, const TransportParams& p,
                             double dt) {
    const UpwindDiffs d = diffs(u, g, i, j);
    const double sign = p.sign == NormalTermSign::Pde ? -1.0 : 1.0;
    double v = u[g.index(i, j)] - dt * p.vx * d.dxm - dt * p.vy * d.dym;
    if (p.F0 != 0.0) v += sign * dt * p.F0 * godunov(d);
    return v;
}

inline double cylindrical_node(const double* u, const Grid2D& g, int i, int j, const CylindricalParams& p,
                               double dt) {
    auto val = [&](int ii, int jj) {
        return (ii < 0 || ii >= g.nx || jj < 0 || jj >= g.ny) ? 0.0 : u[g.index(ii, jj)];
    };
    const double c = val(i, j);
    const double dr = g.dx, dz = g.dy;
    const double r = g.x(i);
    const double r_lo = std::max(r - 0.5 * dr, 0.0);
    const double r_hi = r + 0.5 * dr;

    const double adv = p.v >= 0.0 ? p.v * (c - val(i, j - 1)) / dz : p.v * (val(i, j + 1) - c) / dz;
    const double axial = p.D_L * (val(i, j + 1) - 2.0 * c + val(i, j - 1)) / (dz * dz);
    const double radial =
        p.D_t * (r_hi * (val(i + 1, j) - c) - r_lo * (c - val(i - 1, j))) / (r * dr * dr);
    return c + dt * (-adv + axial + radial);
}

}  // namespace bubblefield::levelset::kernels
