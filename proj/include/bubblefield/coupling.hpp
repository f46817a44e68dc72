#pragma once

// Near-field -> far-field orchestration: per-bubble Young-Laplace solves,
// ellipse fits, level-set initialisation at the far-field placements, the
// refresh cycle in a (static) E-field, and the bubble bookkeeping that tracks
// each bubble as a connected component of {u < 0}.

#include "bubblefield/levelset.hpp"
#include "bubblefield/shape_fit.hpp"
#include "bubblefield/young_laplace.hpp"

#include <complex>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace bubblefield::coupling {

using levelset::Grid2D;
using levelset::InitMode;
using levelset::LevelSetField;
using levelset::TransportParams;
using shape_fit::EllipseParams;
using shape_fit::Point2;
using young_laplace::EFieldParams;

struct NearFieldSetup {
    young_laplace::NearFieldParams params;
    double L = 2.0;
    double ds = 0.001;
    young_laplace::AngleCondition angle = young_laplace::AngleCondition::start(1.5707963267948966);
};

struct TrajectoryPoint {
    double t = 0.0;
    Point2 centroid;
};

struct BubbleRecord {
    int id = 0;
    std::optional<NearFieldSetup> near;  // absent: `ellipse` is given directly
    std::optional<EllipseParams> ellipse;
    std::optional<young_laplace::BubbleProfile> profile;
    Point2 placement;
    std::vector<TrajectoryPoint> trajectory;
    bool lost = false;  // set once its component could not be found again
};

/// Near-field parameters with the E-field form switched on.
young_laplace::NearFieldParams with_efield(young_laplace::NearFieldParams p, const EFieldParams& e);

/// Solves every record that has a near-field setup (in parallel) and stores
/// its profile and fitted ellipse. Errors are rethrown as BubbleError with the
/// bubble id (and `cycle` when >= 0).
void solve_near_fields(std::span<BubbleRecord> records, const std::optional<EFieldParams>& efield = std::nullopt,
                       int cycle = -1);

/// Ellipses translated to the given far-field centers.
std::vector<EllipseParams> placed_ellipses(std::span<const BubbleRecord> records, std::span<const Point2> centers);

/// solve_near_fields, then init_bubbles at the placements. Starts each
/// trajectory at (0, placement). Throws EmptyBubbleList for no records.
LevelSetField near_to_far(std::span<BubbleRecord> records, const Grid2D& grid, InitMode mode = InitMode::Union,
                          std::vector<std::string>* warnings = nullptr);

/// 9/8 eps |E0|^2 sin^2(theta).
double electric_pressure(const EFieldParams& efield, double theta);

struct OscillationParams {
    double r0 = 1.0;      // mean radius
    double r_eps0 = 0.0;  // amplitude
    double omega0 = 0.0;  // resonance frequency
    double k = 1.4;       // polytropic exponent
    double p0 = 0.0;      // hydrostatic pressure
    double sigma = 0.0;
    double rho = 1.0;
};

/// (1 / (2 pi r0)) sqrt(3 k p / rho - 2 sigma / (rho r0)) with p = |p0 - p_E|.
/// Throws ImaginaryFrequency when the radicand is negative.
double breathing_frequency(const OscillationParams& p, double p_E);

/// r0 - r_eps0 exp(i omega0 t).
std::complex<double> oscillation_radius(const OscillationParams& p, double t);

/// Discrete bubble-density bookkeeping for one record.
struct DensityEntry {
    int id = 0;
    double mass = 0.0;
    double area = 0.0;
    Point2 centroid;
    bool lost = false;
};

/// Matches each record to a connected component of {u < 0}: the unclaimed
/// component nearest to the record's predicted position (last trajectory
/// point, moved with `transport` when given), within a gate of
/// 2 (max(a, b) + max(dx, dy)) + F0 * elapsed. Unmatched records are
/// reported as lost (LostBubble is not fatal here).
std::vector<DensityEntry> bubble_density(const LevelSetField& field, std::span<const BubbleRecord> records,
                                         const TransportParams* transport = nullptr);

struct BubbleState {
    int id = 0;
    double a = 0.0;
    double b = 0.0;
    Point2 centroid;
    double mass = 0.0;
    bool lost = false;
};

struct Snapshot {
    LevelSetField field;
    std::vector<BubbleState> bubbles;
    int cycle = 0;
    bool refresh = false;  // emitted right after a near-field refresh
};

struct CycleOptions {
    std::vector<double> snapshot_times;  // strictly increasing, >= 0; the last one is T
    std::size_t refresh_every = 0;       // K far-field steps between refreshes; 0 = never
    InitMode mode = InitMode::Union;
};

/// Near solve -> fit -> far init, then far-field stepping with a near-field
/// refresh every K steps (re-solve in the E-field, refit, re-initialise at
/// the tracked centroids). Snapshots are emitted at every requested time and
/// after every refresh. Stepping per output interval matches
/// levelset::advance, so without E-field and with K = 0 the output equals
/// run_decoupled exactly.
std::vector<Snapshot> run_coupled_cycle(std::vector<BubbleRecord>& records, const Grid2D& grid,
                                        const TransportParams& transport, const std::optional<EFieldParams>& efield,
                                        const CycleOptions& opts, std::vector<std::string>* warnings = nullptr);

/// near_to_far followed by plain levelset::advance between snapshot times.
std::vector<Snapshot> run_decoupled(std::vector<BubbleRecord>& records, const Grid2D& grid,
                                    const TransportParams& transport, const CycleOptions& opts,
                                    std::vector<std::string>* warnings = nullptr);

/// "id,t,a,b,cx,cy,mass" rows for every tracked bubble in every snapshot.
std::string format_bubbles_csv(std::span<const Snapshot> snapshots);

}  // namespace bubblefield::coupling
