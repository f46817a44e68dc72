#include "bubblefield/bvp.hpp"

#include "bubblefield/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace bubblefield::bvp {

namespace {

constexpr const char* kModule = "bvp_core";

double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

// Partial-pivoted forward elimination of the first `pivot_cols` columns of M,
// applied across the full row width (coefficients and right-hand side).
void eliminate(Matrix& M, Eigen::Index pivot_cols, double tol) {
    const Eigen::Index rows = M.rows();
    for (Eigen::Index c = 0; c < pivot_cols; ++c) {
        Eigen::Index p = c;
        M.col(c).segment(c, rows - c).cwiseAbs().maxCoeff(&p);
        p += c;
        if (!(std::abs(M(p, c)) > tol)) {
            throw Error(ErrorCode::SingularSystem, kModule,
                        "pivot " + std::to_string(std::abs(M(p, c))) +
                            " below threshold; boundary conditions are ill-posed");
        }
        if (p != c) M.row(p).swap(M.row(c));
        for (Eigen::Index r = c + 1; r < rows; ++r) {
            const double f = M(r, c) / M(c, c);
            if (f != 0.0) M.row(r) -= f * M.row(c);
        }
    }
}

// Solves the upper-triangular n x n leading block of `U` against `rhs`.
Vector back_substitute(const Matrix& U, Vector rhs) {
    const Eigen::Index n = U.rows();
    for (Eigen::Index i = n - 1; i >= 0; --i) {
        double acc = rhs(i);
        for (Eigen::Index j = i + 1; j < n; ++j) acc -= U(i, j) * rhs(j);
        rhs(i) = acc / U(i, i);
    }
    return rhs;
}

Matrix or_zero(const Matrix& m, int n) { return m.size() == 0 ? Matrix::Zero(n, n) : m; }

void check_bvp(const LinearBVP& bvp) {
    const int n = bvp.dim;
    if (n < 1) throw Error(ErrorCode::InvalidArgument, kModule, "dim must be >= 1");
    if (!bvp.A || !bvp.q) throw Error(ErrorCode::InvalidArgument, kModule, "A and q must be set");
    if (bvp.B_a.rows() != n || bvp.B_a.cols() != n || bvp.B_b.rows() != n || bvp.B_b.cols() != n ||
        bvp.d.size() != n) {
        throw Error(ErrorCode::InvalidArgument, kModule, "boundary blocks must be n x n and d an n-vector");
    }
}

}  // namespace

Mesh::Mesh(std::vector<double> nodes) : nodes_(std::move(nodes)) {
    if (nodes_.size() < 2) {
        throw Error(ErrorCode::MeshTooCoarse, kModule, "mesh needs at least one interval");
    }
    for (std::size_t i = 0; i + 1 < nodes_.size(); ++i) {
        if (!std::isfinite(nodes_[i]) || !std::isfinite(nodes_[i + 1]) || !(nodes_[i + 1] > nodes_[i])) {
            throw Error(ErrorCode::InvalidArgument, kModule, "mesh nodes must be finite and strictly increasing");
        }
    }
}

Mesh Mesh::uniform(double a, double b, std::size_t intervals) {
    if (intervals < 1) throw Error(ErrorCode::MeshTooCoarse, kModule, "mesh needs at least one interval");
    std::vector<double> t(intervals + 1);
    const double h = (b - a) / static_cast<double>(intervals);
    for (std::size_t i = 0; i <= intervals; ++i) t[i] = a + h * static_cast<double>(i);
    t.back() = b;
    return Mesh(std::move(t));
}

namespace detail {

std::vector<Vector> solve_abd(std::span<const Matrix> S, std::span<const Matrix> R,
                              std::span<const Vector> rhs, const Matrix& B_a,
                              const Matrix& B_bm1, const Matrix& B_b, const Vector& d,
                              double pivot_tol) {
    const std::size_t N = S.size();
    if (N < 1) throw Error(ErrorCode::MeshTooCoarse, kModule, "need at least one interval");
    const int n = static_cast<int>(B_b.rows());
    const Matrix Bbm1 = or_zero(B_bm1, n);

    double scale = std::max({max_abs(B_a), max_abs(Bbm1), max_abs(B_b)});
    for (std::size_t i = 0; i < N; ++i) scale = std::max({scale, max_abs(S[i]), max_abs(R[i])});
    const double tol = pivot_tol * (scale > 0.0 ? scale : 1.0);

    std::vector<Vector> x(N + 1, Vector::Zero(n));

    // Border row coefficients on (current block, x_{N-1}, x_N).
    Matrix Bc = B_a;
    Matrix BN = Bbm1;
    Matrix BN1 = B_b;
    Vector bd = d;
    if (N == 1) {  // x_{N-1} is x_0
        Bc += BN;
        BN.setZero();
    }

    struct PivotRows {
        Matrix U, C, EN, EN1;
        Vector r;
    };
    std::vector<PivotRows> piv(N > 1 ? N - 1 : 0);

    for (std::size_t k = 0; k + 1 < N; ++k) {
        // Columns: [x_k | x_{k+1} | x_{N-1} | x_N | rhs]
        Matrix M = Matrix::Zero(2 * n, 4 * n + 1);
        M.block(0, 0, n, n) = S[k];
        if (k + 2 == N) {
            M.block(0, 2 * n, n, n) = R[k];  // x_{k+1} is x_{N-1}
        } else {
            M.block(0, n, n, n) = R[k];
        }
        M.block(0, 4 * n, n, 1) = rhs[k];
        M.block(n, 0, n, n) = Bc;
        M.block(n, 2 * n, n, n) = BN;
        M.block(n, 3 * n, n, n) = BN1;
        M.block(n, 4 * n, n, 1) = bd;

        eliminate(M, n, tol);

        piv[k] = {M.block(0, 0, n, n), M.block(0, n, n, n), M.block(0, 2 * n, n, n),
                  M.block(0, 3 * n, n, n), M.block(0, 4 * n, n, 1)};
        Bc = M.block(n, n, n, n);
        BN = M.block(n, 2 * n, n, n);
        BN1 = M.block(n, 3 * n, n, n);
        bd = M.block(n, 4 * n, n, 1);
    }

    // Final 2n x 2n system in (x_{N-1}, x_N).
    Matrix F = Matrix::Zero(2 * n, 2 * n + 1);
    F.block(0, 0, n, n) = S[N - 1];
    F.block(0, n, n, n) = R[N - 1];
    F.block(0, 2 * n, n, 1) = rhs[N - 1];
    F.block(n, 0, n, n) = Bc + BN;
    F.block(n, n, n, n) = BN1;
    F.block(n, 2 * n, n, 1) = bd;
    eliminate(F, 2 * n, tol);
    const Vector tail = back_substitute(F.leftCols(2 * n), F.col(2 * n));
    x[N - 1] = tail.head(n);
    x[N] = tail.tail(n);

    for (std::size_t kk = N - 1; kk-- > 0;) {
        const PivotRows& p = piv[kk];
        Vector r = p.r - p.EN * x[N - 1] - p.EN1 * x[N];
        if (kk + 2 != N) r -= p.C * x[kk + 1];
        x[kk] = back_substitute(p.U, r);
    }

    for (const auto& v : x) {
        if (!v.allFinite()) throw Error(ErrorCode::SingularSystem, kModule, "non-finite solution");
    }
    return x;
}

}  // namespace detail

Trajectory solve_block_midpoint(const LinearBVP& bvp, const ExtendedBoundary& ext, const Mesh& mesh) {
    check_bvp(bvp);
    const int n = bvp.dim;
    const std::size_t N = mesh.intervals();
    std::vector<Matrix> S(N), R(N);
    std::vector<Vector> r(N);
    const Matrix I = Matrix::Identity(n, n);

#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t ii = 0; ii < static_cast<std::ptrdiff_t>(N); ++ii) {
        const auto i = static_cast<std::size_t>(ii);
        const double h = mesh.step(i);
        const double tm = mesh.midpoint(i);
        const Matrix A = bvp.A(tm, i);
        S[i] = -I / h - 0.5 * A;
        R[i] = I / h - 0.5 * A;
        r[i] = bvp.q(tm, i);
    }

    auto values = detail::solve_abd(S, R, r, bvp.B_a, or_zero(ext.B_bm1, n), bvp.B_b, bvp.d);
    return Trajectory{mesh, std::move(values)};
}

Trajectory solve_multiple_shooting(const LinearBVP& bvp, const Mesh& mesh) {
    check_bvp(bvp);
    const int n = bvp.dim;
    const std::size_t N = mesh.intervals();
    constexpr int kSubsteps = 4;

    std::vector<Matrix> S(N), R(N, Matrix::Identity(n, n));
    std::vector<Vector> r(N);
    bool failed = false;

#pragma omp parallel for schedule(static) reduction(|| : failed)
    for (std::ptrdiff_t ii = 0; ii < static_cast<std::ptrdiff_t>(N); ++ii) {
        const auto i = static_cast<std::size_t>(ii);
        const double h = mesh.step(i) / kSubsteps;
        if (!(h > 1e-14 * std::max(1.0, std::abs(mesh[i])))) {
            failed = true;
            continue;
        }
        // Z = [Y | v], Z' = A Z + [0 | q]
        Matrix Z = Matrix::Zero(n, n + 1);
        Z.leftCols(n).setIdentity();
        auto f = [&](double t, const Matrix& Zc) {
            Matrix dZ = bvp.A(t, i) * Zc;
            dZ.col(n) += bvp.q(t, i);
            return dZ;
        };
        double t = mesh[i];
        for (int k = 0; k < kSubsteps; ++k) {
            const Matrix k1 = f(t, Z);
            const Matrix k2 = f(t + 0.5 * h, Z + 0.5 * h * k1);
            const Matrix k3 = f(t + 0.5 * h, Z + 0.5 * h * k2);
            const Matrix k4 = f(t + h, Z + h * k3);
            Z += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            t += h;
        }
        if (!Z.allFinite()) {
            failed = true;
            continue;
        }
        S[i] = -Z.leftCols(n);
        r[i] = Z.col(n);
    }
    if (failed) {
        throw Error(ErrorCode::IntegrationFailure, kModule,
                    "interval integration produced non-finite values or hit the step floor");
    }

    auto values = detail::solve_abd(S, R, r, bvp.B_a, Matrix::Zero(n, n), bvp.B_b, bvp.d);
    return Trajectory{mesh, std::move(values)};
}

double midpoint_residual(const LinearBVP& bvp, const ExtendedBoundary& ext, const Trajectory& traj) {
    const int n = bvp.dim;
    const Mesh& mesh = traj.mesh;
    const std::size_t N = mesh.intervals();
    const Matrix I = Matrix::Identity(n, n);
    const Matrix Bbm1 = or_zero(ext.B_bm1, n);

    double res = 0.0, mat_norm = 0.0, rhs_norm = 0.0, y_norm = 0.0;
    for (const auto& y : traj.values) y_norm = std::max(y_norm, y.cwiseAbs().maxCoeff());
    for (std::size_t i = 0; i < N; ++i) {
        const double h = mesh.step(i);
        const double tm = mesh.midpoint(i);
        const Matrix A = bvp.A(tm, i);
        const Matrix S = -I / h - 0.5 * A;
        const Matrix R = I / h - 0.5 * A;
        const Vector q = bvp.q(tm, i);
        const Vector row = S * traj.values[i] + R * traj.values[i + 1] - q;
        res = std::max(res, row.cwiseAbs().maxCoeff());
        mat_norm = std::max(mat_norm, (S.cwiseAbs() + R.cwiseAbs()).rowwise().sum().maxCoeff());
        rhs_norm = std::max(rhs_norm, q.cwiseAbs().maxCoeff());
    }
    const Vector bnd = bvp.B_a * traj.values.front() + Bbm1 * traj.values[N - 1] +
                       bvp.B_b * traj.values.back() - bvp.d;
    res = std::max(res, bnd.cwiseAbs().maxCoeff());
    mat_norm = std::max(mat_norm, (bvp.B_a.cwiseAbs() + Bbm1.cwiseAbs() + bvp.B_b.cwiseAbs())
                                      .rowwise()
                                      .sum()
                                      .maxCoeff());
    rhs_norm = std::max(rhs_norm, bvp.d.cwiseAbs().maxCoeff());
    const double denom = mat_norm * y_norm + rhs_norm;
    return denom > 0.0 ? res / denom : res;
}

}  // namespace bubblefield::bvp
