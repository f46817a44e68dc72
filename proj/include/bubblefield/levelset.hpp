#pragma once

// Far-field transport of bubble shapes with the level-set equation
//
//     u_t + v . grad u + F0 |grad u| = 0
//
// on a uniform 2D node grid, first-order upwind in space and forward Euler in
// time. The stencil kernels in this header are OpenMP-parallel over rows; the
// serial twins in `reference` are kept for testing and benchmarking and must
// produce bitwise-identical results.

#include "bubblefield/shape_fit.hpp"

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace bubblefield::levelset {

using shape_fit::EllipseParams;
using shape_fit::Point2;

/// Node grid: node (i, j) sits at (ax + i dx, ay + j dy), 0 <= i < nx,
/// 0 <= j < ny, with dx = (bx - ax) / nx.
struct Grid2D {
    int nx = 0;
    int ny = 0;
    double dx = 0.0;
    double dy = 0.0;
    double ax = 0.0;
    double ay = 0.0;
    double bx = 0.0;
    double by = 0.0;

    static Grid2D from_extent(int nx, int ny, double ax, double ay, double bx, double by);

    void validate() const;
    std::size_t size() const noexcept { return static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny); }
    std::size_t index(int i, int j) const noexcept {
        return static_cast<std::size_t>(j) * static_cast<std::size_t>(nx) + static_cast<std::size_t>(i);
    }
    double x(int i) const noexcept { return ax + dx * i; }
    double y(int j) const noexcept { return ay + dy * j; }
};

struct LevelSetField {
    Grid2D grid;
    std::vector<double> u;  // row-major, j outer
    double time = 0.0;

    LevelSetField() = default;
    explicit LevelSetField(const Grid2D& g, double t = 0.0) : grid(g), u(g.size(), 0.0), time(t) {}

    double at(int i, int j) const noexcept { return u[grid.index(i, j)]; }
    double& at(int i, int j) noexcept { return u[grid.index(i, j)]; }
};

/// Sign of the normal-speed term in the discrete update.
enum class NormalTermSign {
    Pde,      // -dt F0 |grad u|: the u < 0 region grows at speed F0
    Literal,  // +dt F0 |grad u|
};

struct TransportParams {
    double vx = 0.0;
    double vy = 0.0;
    double F0 = 0.0;
    NormalTermSign sign = NormalTermSign::Pde;

    /// Throws InvalidArgument for negative speeds (the upwind direction is fixed).
    void validate() const;
};

struct UpwindDiffs {
    double dxm = 0.0;  // (u_ij - u_{i-1,j}) / dx
    double dxp = 0.0;  // (u_{i+1,j} - u_ij) / dx
    double dym = 0.0;
    double dyp = 0.0;
};

/// One-sided differences; outside the grid the edge value is repeated
/// (zero-gradient clamp).
UpwindDiffs upwind_diffs(const LevelSetField& field, int i, int j);

/// Godunov upwind |grad u| for outward motion (F0 >= 0).
double godunov_grad_mag(const LevelSetField& field, int i, int j);

/// 0.9 / (vx/dx + vy/dy + F0 sqrt(1/dx^2 + 1/dy^2)); +inf when nothing moves.
double cfl_dt(const Grid2D& grid, const TransportParams& p);

/// One explicit step. Throws CflViolation if dt exceeds cfl_dt.
LevelSetField step(const LevelSetField& field, const TransportParams& p, double dt);

/// Same as step() but writes into a preallocated output field.
void step_into(const LevelSetField& in, LevelSetField& out, const TransportParams& p, double dt);

/// ceil(duration / cfl_dt) equal substeps, at least one.
std::size_t substeps_for(const Grid2D& grid, const TransportParams& p, double duration);

/// Advances by `duration` in substeps_for() equal steps.
LevelSetField advance(const LevelSetField& field, const TransportParams& p, double duration);

enum class InitMode {
    Union,           // u = min over bubbles of the per-bubble quadratic
    PaperPiecewise,  // each node takes the quadratic of the bubble nearest in x
};

/// Per-bubble quadratic (x - cx)^2 + ((y - cy) a / b)^2 - a^2, evaluated on
/// the grid. Bubbles use their `center` as the far-field placement.
/// Throws EmptyBubbleList. Bubbles outside the extent or overlapping another
/// bubble's bounding ellipse are reported through `warnings` when given.
LevelSetField init_bubbles(std::span<const EllipseParams> bubbles, const Grid2D& grid,
                           InitMode mode = InitMode::Union, std::vector<std::string>* warnings = nullptr);

double bubble_quadratic(const EllipseParams& e, double x, double y);

/// Connected component (4-neighbour) of {u < 0}.
struct Component {
    std::size_t cells = 0;
    double area = 0.0;  // cells * dx * dy
    double mass = 0.0;  // sum |u| dx dy
    Point2 centroid;    // area centroid of the component's nodes
    bool touches_boundary = false;
};

/// Components in scan order (first node by j, then i). `labels`, when given,
/// receives the component index per node or -1 outside {u < 0}.
std::vector<Component> label_components(const LevelSetField& field, std::vector<int>* labels = nullptr);

/// Range of the central-difference |grad u| over nodes next to a sign change.
/// The initial quadratics are not distance functions and no reinitialisation
/// is done, so this is reported as a diagnostic only.
struct GradientBand {
    double min = 0.0;
    double max = 0.0;
    std::size_t nodes = 0;
};
GradientBand zero_band_gradient(const LevelSetField& field);

// Snapshot text format: "# levelset nx ny dx dy ox oy t", then ny lines of nx
// values (row j fixed, i ascending), 17 significant digits.
std::string format_snapshot(const LevelSetField& field);
LevelSetField parse_snapshot(const std::string& text);
void write_snapshot(const LevelSetField& field, const std::filesystem::path& path);
LevelSetField read_snapshot(const std::filesystem::path& path);

/// Writes `contents` to `path` through a temporary file and a rename.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);

// Cylindrical convection-diffusion reference model on an (r, z) grid, with
// x = r and y = z. The radial origin must be offset from the axis (ax > 0).
struct CylindricalParams {
    double v = 0.0;    // axial velocity
    double D_L = 0.0;  // axial diffusion
    double D_t = 0.0;  // radial diffusion
};

/// 0.9 / (|v|/dz + 2 D_L/dz^2 + 2 D_t/dr^2); +inf when all coefficients vanish.
double cd_cfl_dt(const Grid2D& grid, const CylindricalParams& p);

/// One explicit step of u_t = -v u_z + D_L u_zz + (D_t/r)(r u_r)_r with
/// Dirichlet u = 0 outside the grid. Throws CflViolation.
LevelSetField cd_cylindrical_step(const LevelSetField& field, const CylindricalParams& p, double dt);

/// Discrete mass sum u r dr dz.
double cylindrical_mass(const LevelSetField& field);

namespace reference {

LevelSetField step(const LevelSetField& field, const TransportParams& p, double dt);
LevelSetField cd_cylindrical_step(const LevelSetField& field, const CylindricalParams& p, double dt);

}  // namespace reference

}  // namespace bubblefield::levelset
