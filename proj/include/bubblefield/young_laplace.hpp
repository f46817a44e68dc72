#pragma once

// Near-field bubble formation: the axisymmetric Young-Laplace shape equations
// in arc length s,
//
//     dr/ds = cos(theta),  dz/ds = sin(theta),  dtheta/ds = G(r, z, theta),
//
// with three right-hand side variants for G, solved as a nonlinear BVP by
// Newton's method over the linear midpoint solver in bvp.hpp.

#include "bubblefield/bvp.hpp"

#include <Eigen/Dense>

#include <functional>
#include <optional>
#include <string_view>
#include <vector>

namespace bubblefield::young_laplace {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

/// Radius below which sin(theta)/r is replaced by its apex limit.
inline constexpr double kAxisFloor = 1e-9;

enum class RhsForm {
    Bond,           // G = 2 + beta z - sin(theta)/r
    Pressure,       // G = dp/alpha - sin(theta)/r
    ElectricField,  // G = dp/alpha + (rho g z - p_E(theta))/alpha - sin(theta)/r
};

/// Which electric pressure enters the E-field form.
enum class EFieldForm {
    Canonical,  // p_E = 9/8 eps |E0|^2 sin^2(theta)
    Section54,  // p_E = 9/8 |E0|^2 sin(theta)
};

struct EFieldParams {
    double E0_sq = 0.0;
    double epsilon = 1.0;
    EFieldForm form = EFieldForm::Canonical;
};

struct NearFieldParams {
    RhsForm form = RhsForm::Pressure;
    double a = 0.01;                  // r(0)
    double delta_p_over_alpha = 0.0;  // Pressure and ElectricField forms
    double beta = 0.0;                // Bond form
    double rho = 0.0;
    double g = 0.0;
    double alpha = 1.0;  // mono-layer surface tension (ElectricField form)
    double sigma = 1.0;
    double R_t = 1.0;
    std::optional<EFieldParams> efield;  // required by the ElectricField form

    /// Throws InvalidArgument when the invariants do not hold.
    void validate() const;
};

/// Position on the generating curve: radius, height, elevation angle.
struct ProfileState {
    double r = 0.0;
    double z = 0.0;
    double theta = 0.0;

    Vec3 vec() const { return {r, z, theta}; }
    static ProfileState from(const Vec3& y) { return {y(0), y(1), y(2)}; }
};

struct ProfileSample {
    double s = 0.0;
    ProfileState state;
};

struct BubbleProfile {
    std::vector<ProfileSample> samples;
    double L = 0.0;
    RhsForm variant = RhsForm::Pressure;
    std::vector<double> newton_updates;  // max-norm of each full Newton step
};

std::string_view to_string(RhsForm form) noexcept;

/// Electric pressure as it enters the E-field right-hand side.
double field_pressure(const EFieldParams& e, double theta);

/// (cos theta, sin theta, G). Throws AxisSingularity for r < kAxisFloor.
Vec3 rhs(const ProfileState& state, const NearFieldParams& p);

/// d rhs / d(r, z, theta). Throws AxisSingularity for r < kAxisFloor.
Mat3 jacobian(const ProfileState& state, const NearFieldParams& p);

/// Same as rhs/jacobian, but below kAxisFloor sin(theta)/r is replaced by its
/// symmetric-apex limit dtheta/ds, so G becomes half the driving term.
Vec3 rhs_regularized(const ProfileState& state, const NearFieldParams& p);
Mat3 jacobian_regularized(const ProfileState& state, const NearFieldParams& p);

/// Third boundary condition next to r(0) = a, z(0) = 0.
struct AngleCondition {
    enum class Where { Start, End };
    Where where = Where::Start;
    double theta = 1.5707963267948966;

    static AngleCondition start(double theta) { return {Where::Start, theta}; }
    static AngleCondition end(double theta) { return {Where::End, theta}; }
};

struct NewtonOptions {
    double tolerance = 1e-9;
    int max_iterations = 50;
    int max_halvings = 8;
};

/// Solves the nonlinear profile on a uniform mesh of `intervals` steps over
/// [0, L]. `guess`, when given, is resampled onto the new mesh and used as the
/// first Newton iterate.
BubbleProfile solve_profile(const NearFieldParams& p, double L, std::size_t intervals,
                            const AngleCondition& angle = {}, const NewtonOptions& opts = {},
                            const BubbleProfile* guess = nullptr);

/// Closure test for continuation: stop once |residual(profile)| <= tolerance.
/// A sign change of the residual between two lengths triggers bisection.
struct ClosureCriterion {
    std::function<double(const BubbleProfile&)> residual;
    double tolerance = 1e-3;

    static ClosureCriterion radius_at_end(double tol);
    static ClosureCriterion angle_at_end(double theta, double tol);
    static ClosureCriterion always();
};

struct ContinuationOptions {
    double growth = 1.05;
    double max_factor = 100.0;  // NoClosure beyond max_factor * L0
    double ds = 0.001;          // intervals = max(10, round(L / ds))
    int max_bisections = 60;  // also caps step halvings after a failed solve
    AngleCondition angle = AngleCondition::start(1.5707963267948966);
    NewtonOptions newton;
};

struct ContinuationResult {
    BubbleProfile profile;
    double L = 0.0;
    int steps = 0;
};

ContinuationResult continue_in_L(const NearFieldParams& p, double L0, const ClosureCriterion& stop,
                                 const ContinuationOptions& opts = {});

/// beta = -rho g R_t^2 / sigma. Throws ZeroSurfaceTension for sigma == 0.
double bond_number(double rho, double g, double R_t, double sigma);

/// Number of intervals for a step size: max(10, round(L / ds)).
std::size_t intervals_for(double L, double ds);

}  // namespace bubblefield::young_laplace
