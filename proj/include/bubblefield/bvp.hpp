#pragma once

// Linear two-point boundary value problems
//
//     y'(t) = A(t) y(t) + q(t),   t in [t_1, t_{N+1}]
//     B_a y(t_1) + B_{b-1} y(t_N) + B_b y(t_{N+1}) = d
//
// solved either by the midpoint box scheme or by multiple shooting. Both
// routes end in the same almost-block-diagonal system (block bidiagonal rows
// plus one bordered boundary row), which is factored by row-pivoted block
// elimination in O(N n^3).

#include <Eigen/Dense>

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace bubblefield::bvp {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Strictly increasing parameter nodes t_1 < ... < t_{N+1}.
class Mesh {
public:
    /// Throws MeshTooCoarse for fewer than two nodes and InvalidArgument for
    /// non-increasing or non-finite nodes.
    explicit Mesh(std::vector<double> nodes);

    static Mesh uniform(double a, double b, std::size_t intervals);

    std::size_t intervals() const noexcept { return nodes_.size() - 1; }
    std::size_t size() const noexcept { return nodes_.size(); }
    double operator[](std::size_t i) const noexcept { return nodes_[i]; }
    double step(std::size_t i) const noexcept { return nodes_[i + 1] - nodes_[i]; }
    double midpoint(std::size_t i) const noexcept { return nodes_[i] + 0.5 * step(i); }
    double front() const noexcept { return nodes_.front(); }
    double back() const noexcept { return nodes_.back(); }
    std::span<const double> nodes() const noexcept { return nodes_; }

private:
    std::vector<double> nodes_;
};

/// Coefficient callables receive the evaluation point and the index of the
/// mesh interval it belongs to. Smooth coefficients ignore the index;
/// piecewise-defined ones (the Newton linearisation) use it to avoid
/// ambiguity at interval endpoints.
using MatrixFn = std::function<Matrix(double t, std::size_t interval)>;
using VectorFn = std::function<Vector(double t, std::size_t interval)>;

struct LinearBVP {
    int dim = 0;
    MatrixFn A;
    VectorFn q;
    Matrix B_a;
    Matrix B_b;
    Vector d;
};

/// Optional coupling of the second-to-last node into the boundary row.
struct ExtendedBoundary {
    Matrix B_bm1;  // empty means zero

    static ExtendedBoundary none() { return {}; }
};

struct Trajectory {
    Mesh mesh;
    std::vector<Vector> values;
};

/// Midpoint (box) scheme:
///   (y_{i+1} - y_i)/h_i = A(t_{i+1/2}) (y_i + y_{i+1})/2 + q(t_{i+1/2}).
Trajectory solve_block_midpoint(const LinearBVP& bvp, const ExtendedBoundary& ext, const Mesh& mesh);

inline Trajectory solve_block_midpoint(const LinearBVP& bvp, const Mesh& mesh) {
    return solve_block_midpoint(bvp, ExtendedBoundary::none(), mesh);
}

/// Multiple shooting. Per interval the fundamental matrix (Y(t_i) = I) and a
/// particular solution (v(t_i) = 0) are integrated with four classical RK4
/// substeps; the node values s_i then satisfy s_{i+1} = Y_i s_i + v_i plus the
/// boundary row.
Trajectory solve_multiple_shooting(const LinearBVP& bvp, const Mesh& mesh);

/// Relative residual ||M y - b||_inf / (||M||_inf ||y||_inf + ||b||_inf) of
/// the assembled midpoint system for a given trajectory.
double midpoint_residual(const LinearBVP& bvp, const ExtendedBoundary& ext, const Trajectory& traj);

namespace detail {

/// Generic almost-block-diagonal system
///   S_i x_i + R_i x_{i+1} = r_i,  i = 0..N-1
///   B_a x_0 + B_{b-1} x_{N-1} + B_b x_N = d
/// solved by row-pivoted block elimination. Throws SingularSystem when a pivot
/// falls below `pivot_tol` times the largest block entry.
std::vector<Vector> solve_abd(std::span<const Matrix> S, std::span<const Matrix> R,
                              std::span<const Vector> rhs, const Matrix& B_a,
                              const Matrix& B_bm1, const Matrix& B_b, const Vector& d,
                              double pivot_tol = 1e-12);

}  // namespace detail

}  // namespace bubblefield::bvp
