#include "bubblefield/coupling.hpp"

#include "bubblefield/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <limits>
#include <numbers>

namespace bubblefield::coupling {

namespace {
constexpr const char* kModule = "coupling";

void check_times(const std::vector<double>& times) {
    if (times.empty()) throw Error(ErrorCode::InvalidArgument, kModule, "no snapshot times");
    for (std::size_t k = 0; k < times.size(); ++k) {
        if (!std::isfinite(times[k]) || times[k] < 0.0) {
            throw Error(ErrorCode::InvalidArgument, kModule, "snapshot times must be finite and >= 0");
        }
        if (k > 0 && !(times[k] > times[k - 1])) {
            throw Error(ErrorCode::InvalidArgument, kModule, "snapshot times must be strictly increasing");
        }
    }
    if (!(times.back() > 0.0)) throw Error(ErrorCode::InvalidArgument, kModule, "final time T must be > 0");
}

// Matches components and appends the centroids to the trajectories.
Snapshot emit(const LevelSetField& field, std::vector<BubbleRecord>& records, const TransportParams& transport,
              int cycle, bool refresh, std::vector<std::string>* warnings) {
    const auto density = bubble_density(field, records, &transport);
    Snapshot snap;
    snap.field = field;
    snap.cycle = cycle;
    snap.refresh = refresh;
    for (std::size_t k = 0; k < records.size(); ++k) {
        auto& rec = records[k];
        const auto& d = density[k];
        if (d.lost && !rec.lost) {
            rec.lost = true;
            if (warnings != nullptr) {
                char buf[128];
                std::snprintf(buf, sizeof buf, "LostBubble: bubble %d vanished at t = %.6g", rec.id, field.time);
                warnings->emplace_back(buf);
            }
        }
        BubbleState s;
        s.id = rec.id;
        s.lost = d.lost;
        s.mass = d.mass;
        s.centroid = d.centroid;
        if (rec.ellipse) {
            s.a = rec.ellipse->a;
            s.b = rec.ellipse->b;
        }
        if (!d.lost && (rec.trajectory.empty() || field.time > rec.trajectory.back().t)) {
            rec.trajectory.push_back({field.time, d.centroid});
        }
        snap.bubbles.push_back(s);
    }
    return snap;
}

// Re-rasterises the current ellipses at the tracked centroids; lost bubbles
// are left out.
void reinitialise(LevelSetField& field, const std::vector<BubbleRecord>& records, InitMode mode,
                  std::vector<std::string>* warnings) {
    std::vector<EllipseParams> placed;
    for (const auto& rec : records) {
        if (rec.lost || rec.trajectory.empty()) continue;
        EllipseParams e = *rec.ellipse;
        e.center = rec.trajectory.back().centroid;
        placed.push_back(e);
    }
    if (placed.empty()) {
        if (warnings != nullptr) warnings->emplace_back("refresh skipped: every bubble has been lost");
        return;
    }
    const double t = field.time;
    field = levelset::init_bubbles(placed, field.grid, mode, nullptr);
    field.time = t;
}

[[noreturn]] void rethrow_with_cycle(const Error& e, int cycle) {
    throw Error(e.code(), e.module(), "cycle " + std::to_string(cycle) + ": " + e.detail());
}
}  // namespace

young_laplace::NearFieldParams with_efield(young_laplace::NearFieldParams p, const EFieldParams& e) {
    p.form = young_laplace::RhsForm::ElectricField;
    p.efield = e;
    return p;
}

void solve_near_fields(std::span<BubbleRecord> records, const std::optional<EFieldParams>& efield, int cycle) {
    const auto n = static_cast<std::ptrdiff_t>(records.size());
    std::vector<std::exception_ptr> failures(records.size());
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t k = 0; k < n; ++k) {
        auto& rec = records[static_cast<std::size_t>(k)];
        try {
            if (!rec.near) {
                if (!rec.ellipse) {
                    throw Error(ErrorCode::InvalidArgument, kModule, "record has neither near-field setup nor ellipse");
                }
                continue;
            }
            const auto& setup = *rec.near;
            const auto params = efield ? with_efield(setup.params, *efield) : setup.params;
            const auto intervals = young_laplace::intervals_for(setup.L, setup.ds);
            auto profile = young_laplace::solve_profile(params, setup.L, intervals, setup.angle);
            rec.ellipse = shape_fit::fit_ellipse(profile);
            rec.profile = std::move(profile);
        } catch (...) {
            failures[static_cast<std::size_t>(k)] = std::current_exception();
        }
    }
    for (std::size_t k = 0; k < failures.size(); ++k) {
        if (!failures[k]) continue;
        try {
            std::rethrow_exception(failures[k]);
        } catch (const Error& e) {
            throw BubbleError(e, records[k].id, cycle);
        }
    }
}

std::vector<EllipseParams> placed_ellipses(std::span<const BubbleRecord> records, std::span<const Point2> centers) {
    if (records.size() != centers.size()) {
        throw Error(ErrorCode::InvalidArgument, kModule, "one center per record required");
    }
    std::vector<EllipseParams> out;
    out.reserve(records.size());
    for (std::size_t k = 0; k < records.size(); ++k) {
        if (!records[k].ellipse) {
            throw Error(ErrorCode::InvalidArgument, kModule,
                        "bubble " + std::to_string(records[k].id) + " has no fitted ellipse");
        }
        EllipseParams e = *records[k].ellipse;
        e.center = centers[k];
        out.push_back(e);
    }
    return out;
}

LevelSetField near_to_far(std::span<BubbleRecord> records, const Grid2D& grid, InitMode mode,
                          std::vector<std::string>* warnings) {
    if (records.empty()) throw Error(ErrorCode::EmptyBubbleList, kModule, "no bubble records");
    solve_near_fields(records);
    std::vector<Point2> centers;
    for (const auto& rec : records) centers.push_back(rec.placement);
    const auto ellipses = placed_ellipses(records, centers);
    auto field = levelset::init_bubbles(ellipses, grid, mode, warnings);
    field.time = 0.0;
    for (auto& rec : records) {
        rec.lost = false;
        rec.trajectory.assign(1, TrajectoryPoint{0.0, rec.placement});
    }
    return field;
}

double electric_pressure(const EFieldParams& efield, double theta) {
    const double s = std::sin(theta);
    return 9.0 / 8.0 * efield.epsilon * efield.E0_sq * s * s;
}

double breathing_frequency(const OscillationParams& p, double p_E) {
    if (!(p.r0 > 0.0) || !(p.rho > 0.0) || !(p.k > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, kModule, "r0, rho and k must be > 0");
    }
    const double pressure = std::abs(p.p0 - p_E);
    const double drive = 3.0 * p.k * pressure / p.rho;
    const double tension = 2.0 * p.sigma / (p.rho * p.r0);
    if (drive < tension) {
        throw Error(ErrorCode::ImaginaryFrequency, kModule, "surface tension dominates: no breathing mode");
    }
    return std::sqrt(drive - tension) / (2.0 * std::numbers::pi * p.r0);
}

std::complex<double> oscillation_radius(const OscillationParams& p, double t) {
    return p.r0 - p.r_eps0 * std::exp(std::complex<double>(0.0, p.omega0 * t));
}

std::vector<DensityEntry> bubble_density(const LevelSetField& field, std::span<const BubbleRecord> records,
                                         const TransportParams* transport) {
    const auto comps = levelset::label_components(field);
    std::vector<bool> claimed(comps.size(), false);
    const double cell = std::max(field.grid.dx, field.grid.dy);

    std::vector<DensityEntry> out;
    out.reserve(records.size());
    for (const auto& rec : records) {
        DensityEntry entry;
        entry.id = rec.id;
        entry.lost = true;
        if (rec.lost) {
            out.push_back(entry);
            continue;
        }
        Point2 predicted = rec.placement;
        double elapsed = field.time;
        if (!rec.trajectory.empty()) {
            predicted = rec.trajectory.back().centroid;
            elapsed = field.time - rec.trajectory.back().t;
        }
        if (transport != nullptr) {
            predicted.x += transport->vx * elapsed;
            predicted.y += transport->vy * elapsed;
        }
        const double size = rec.ellipse ? std::max(rec.ellipse->a, rec.ellipse->b) : 0.0;
        const double gate = 2.0 * (size + cell) + (transport != nullptr ? transport->F0 * elapsed : 0.0);

        std::size_t best = comps.size();
        double best_d = std::numeric_limits<double>::infinity();
        for (std::size_t c = 0; c < comps.size(); ++c) {
            if (claimed[c]) continue;
            const double d = std::hypot(comps[c].centroid.x - predicted.x, comps[c].centroid.y - predicted.y);
            if (d < best_d) {
                best_d = d;
                best = c;
            }
        }
        if (best < comps.size() && best_d <= gate) {
            claimed[best] = true;
            entry.lost = false;
            entry.mass = comps[best].mass;
            entry.area = comps[best].area;
            entry.centroid = comps[best].centroid;
        }
        out.push_back(entry);
    }
    return out;
}

std::vector<Snapshot> run_coupled_cycle(std::vector<BubbleRecord>& records, const Grid2D& grid,
                                        const TransportParams& transport, const std::optional<EFieldParams>& efield,
                                        const CycleOptions& opts, std::vector<std::string>* warnings) {
    check_times(opts.snapshot_times);
    transport.validate();
    if (records.empty()) throw Error(ErrorCode::EmptyBubbleList, kModule, "no bubble records");

    LevelSetField field;
    if (efield) {
        solve_near_fields(records, efield, 0);
        std::vector<Point2> centers;
        for (const auto& rec : records) centers.push_back(rec.placement);
        field = levelset::init_bubbles(placed_ellipses(records, centers), grid, opts.mode, warnings);
        for (auto& rec : records) {
            rec.lost = false;
            rec.trajectory.assign(1, TrajectoryPoint{0.0, rec.placement});
        }
    } else {
        field = near_to_far(records, grid, opts.mode, warnings);
    }

    std::vector<Snapshot> out;
    int cycle = 0;
    std::size_t since_refresh = 0;
    LevelSetField scratch;
    for (const double target : opts.snapshot_times) {
        if (target == 0.0) {
            out.push_back(emit(field, records, transport, cycle, false, warnings));
            continue;
        }
        try {
            const double start = field.time;
            const double duration = target - start;
            const std::size_t n = levelset::substeps_for(field.grid, transport, duration);
            const double dt = duration / static_cast<double>(n);
            for (std::size_t m = 0; m < n; ++m) {
                levelset::step_into(field, scratch, transport, dt);
                std::swap(field, scratch);
                if (opts.refresh_every == 0 || ++since_refresh < opts.refresh_every) continue;
                since_refresh = 0;
                ++cycle;
                // Track first so the new placements are the current centroids.
                emit(field, records, transport, cycle, true, warnings);
                solve_near_fields(records, efield, cycle);
                reinitialise(field, records, opts.mode, warnings);
                out.push_back(emit(field, records, transport, cycle, true, warnings));
            }
            field.time = start + duration;
        } catch (const BubbleError&) {
            throw;
        } catch (const Error& e) {
            rethrow_with_cycle(e, cycle);
        }
        out.push_back(emit(field, records, transport, cycle, false, warnings));
    }
    return out;
}

std::vector<Snapshot> run_decoupled(std::vector<BubbleRecord>& records, const Grid2D& grid,
                                    const TransportParams& transport, const CycleOptions& opts,
                                    std::vector<std::string>* warnings) {
    check_times(opts.snapshot_times);
    auto field = near_to_far(records, grid, opts.mode, warnings);
    std::vector<Snapshot> out;
    for (const double target : opts.snapshot_times) {
        if (target > field.time) field = levelset::advance(field, transport, target - field.time);
        out.push_back(emit(field, records, transport, 0, false, warnings));
    }
    return out;
}

std::string format_bubbles_csv(std::span<const Snapshot> snapshots) {
    std::string out = "id,t,a,b,cx,cy,mass\n";
    char buf[256];
    for (const auto& snap : snapshots) {
        for (const auto& b : snap.bubbles) {
            if (b.lost) continue;
            std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", b.id, snap.field.time, b.a,
                          b.b, b.centroid.x, b.centroid.y, b.mass);
            out += buf;
        }
    }
    return out;
}

}  // namespace bubblefield::coupling
