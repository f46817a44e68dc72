#include "bubblefield/runner.hpp"

#include "bubblefield/errors.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <numbers>

namespace bubblefield::runner {

namespace {
namespace fs = std::filesystem;
using config::Mode;
using config::RunConfig;

constexpr const char* kVersion = "1.0.0";

std::string shortest(double v) {
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

class Writer {
public:
    Writer(fs::path dir, RunResult& result) : dir_(std::move(dir)), result_(result) {}
    void operator()(const std::string& name, const std::string& contents) {
        const fs::path path = dir_ / name;
        levelset::write_file_atomic(path, contents);
        result_.files.push_back(path);
    }
    void snapshot(const levelset::LevelSetField& field) {
        char name[96];
        std::snprintf(name, sizeof name, "snapshot_%03zu_t%s.txt", count_++, shortest(field.time).c_str());
        (*this)(name, levelset::format_snapshot(field));
    }

private:
    fs::path dir_;
    RunResult& result_;
    std::size_t count_ = 0;
};

std::vector<coupling::BubbleRecord> make_records(const RunConfig& cfg) {
    std::vector<coupling::BubbleRecord> out;
    for (const auto& b : cfg.bubbles) {
        out.push_back({b.id, b.near, b.ellipse, std::nullopt, b.placement, {}, false});
    }
    return out;
}

std::string table_csv(const std::vector<coupling::BubbleRecord>& records) {
    std::string out = "id,dp_over_alpha,a,b\n";
    char buf[160];
    for (const auto& r : records) {
        if (!r.near || !r.ellipse) continue;
        std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g,%.17g\n", r.id, r.near->params.delta_p_over_alpha,
                      r.ellipse->a, r.ellipse->b);
        out += buf;
    }
    return out;
}

void write_profiles(Writer& write, const std::vector<coupling::BubbleRecord>& records) {
    bool any = false;
    for (const auto& r : records) {
        if (!r.profile) continue;
        write("profile_" + std::to_string(r.id) + ".csv", format_profile_csv(*r.profile));
        any = true;
    }
    if (any) write("table.csv", table_csv(records));
}

std::string oscillation_csv(const RunConfig& cfg, const std::vector<coupling::BubbleRecord>& records,
                            std::vector<std::string>& warnings) {
    std::string out = "id,r0,p_E,omega0\n";
    young_laplace::EFieldParams canonical = *cfg.efield;
    canonical.form = young_laplace::EFieldForm::Canonical;
    const double p_E = coupling::electric_pressure(canonical, std::numbers::pi / 2.0);
    char buf[160];
    for (const auto& r : records) {
        if (!r.ellipse) continue;
        coupling::OscillationParams op;
        op.r0 = 0.5 * (r.ellipse->a + r.ellipse->b);
        op.k = cfg.oscillation.k;
        op.p0 = cfg.oscillation.p0;
        op.sigma = r.near ? r.near->params.sigma : 0.0;
        op.rho = r.near ? r.near->params.rho : 0.0;
        double omega = std::nan("");
        try {
            omega = coupling::breathing_frequency(op, p_E);
        } catch (const Error& e) {
            warnings.push_back("bubble " + std::to_string(r.id) + ": " + e.what());
        }
        std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g,%.17g\n", r.id, op.r0, p_E, omega);
        out += buf;
    }
    return out;
}

// Positive density bump 1 - q/a^2 inside each ellipse, 0 outside.
levelset::LevelSetField cd_initial(const levelset::Grid2D& grid, const std::vector<shape_fit::EllipseParams>& es) {
    levelset::LevelSetField f(grid);
    for (int j = 0; j < grid.ny; ++j) {
        for (int i = 0; i < grid.nx; ++i) {
            double v = 0.0;
            for (const auto& e : es) {
                v += std::max(0.0, -levelset::bubble_quadratic(e, grid.x(i), grid.y(j)) / (e.a * e.a));
            }
            f.at(i, j) = v;
        }
    }
    return f;
}

void run_cd_reference(const RunConfig& cfg, std::vector<coupling::BubbleRecord>& records, Writer& write) {
    coupling::solve_near_fields(records);
    std::vector<shape_fit::Point2> centers;
    for (const auto& r : records) centers.push_back(r.placement);
    auto field = cd_initial(*cfg.grid, coupling::placed_ellipses(records, centers));
    const auto& p = *cfg.cylindrical;
    std::string mass = "t,mass\n";
    char buf[96];
    auto log = [&] {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", field.time, levelset::cylindrical_mass(field));
        mass += buf;
    };
    for (const double target : cfg.times) {
        if (target > field.time) {
            const double start = field.time, duration = target - start;
            const double limit = levelset::cd_cfl_dt(field.grid, p);
            const std::size_t n =
                std::isfinite(limit) ? std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(duration / limit)))
                                     : 1;
            const double dt = duration / static_cast<double>(n);
            for (std::size_t k = 0; k < n; ++k) field = levelset::cd_cylindrical_step(field, p, dt);
            field.time = start + duration;
        }
        log();
        write.snapshot(field);
    }
    write("cd_mass.csv", mass);
}

}  // namespace

std::string format_profile_csv(const young_laplace::BubbleProfile& profile) {
    std::string out = "s,r,z,theta\n";
    char buf[160];
    for (const auto& s : profile.samples) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g\n", s.s, s.state.r, s.state.z, s.state.theta);
        out += buf;
    }
    return out;
}

RunResult run(const RunConfig& cfg, const fs::path& out_dir) {
    cfg.validate();
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw Error(ErrorCode::IoError, "cli", out_dir.string() + ": " + ec.message());

    RunResult result;
    Writer write(out_dir, result);
    auto records = make_records(cfg);
    coupling::CycleOptions opts;
    opts.snapshot_times = cfg.times;
    opts.mode = cfg.init_mode;

    std::vector<coupling::Snapshot> snaps;
    switch (cfg.mode) {
        case Mode::NearOnly:
            coupling::solve_near_fields(records);
            break;
        case Mode::FarOnly:
            snaps = coupling::run_decoupled(records, *cfg.grid, cfg.transport, opts, &result.warnings);
            break;
        case Mode::Coupled:
            opts.refresh_every = cfg.refresh_every;
            snaps = coupling::run_coupled_cycle(records, *cfg.grid, cfg.transport, std::nullopt, opts,
                                                &result.warnings);
            break;
        case Mode::CoupledEfield:
            opts.refresh_every = cfg.refresh_every;
            snaps = coupling::run_coupled_cycle(records, *cfg.grid, cfg.transport, cfg.efield, opts,
                                                &result.warnings);
            break;
        case Mode::CdReference:
            run_cd_reference(cfg, records, write);
            break;
    }

    write_profiles(write, records);
    for (const auto& s : snaps) write.snapshot(s.field);
    if (!snaps.empty()) write("bubbles.csv", coupling::format_bubbles_csv(snaps));
    if (cfg.mode == Mode::CoupledEfield) write("oscillation.csv", oscillation_csv(cfg, records, result.warnings));

    RunConfig resolved = cfg;
    resolved.output_dir = out_dir.string();
    write("manifest.ini", config::format_config(resolved) + "\n[manifest]\nversion = " + kVersion + "\n");
    return result;
}

std::vector<TableRow> table(const RunConfig& cfg) {
    auto records = make_records(cfg);
    std::erase_if(records, [](const coupling::BubbleRecord& r) { return !r.near; });
    if (records.empty()) {
        throw Error(ErrorCode::ConfigError, "config", "bubble: no bubble has a near-field setup");
    }
    coupling::solve_near_fields(records);
    std::vector<TableRow> rows;
    for (const auto& r : records) {
        rows.push_back({r.id, r.near->params.delta_p_over_alpha, r.ellipse->a, r.ellipse->b});
    }
    return rows;
}

std::string format_table(const std::vector<TableRow>& rows, bool csv) {
    std::string out;
    char buf[160];
    if (csv) {
        out = "id,dp_over_alpha,a,b\n";
        for (const auto& r : rows) {
            std::snprintf(buf, sizeof buf, "%d,%.6f,%.6f,%.6f\n", r.id, r.dp_over_alpha, r.a, r.b);
            out += buf;
        }
        return out;
    }
    std::snprintf(buf, sizeof buf, "%4s  %13s  %10s  %10s\n", "id", "dp_over_alpha", "a", "b");
    out = buf;
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof buf, "%4d  %13.6f  %10.6f  %10.6f\n", r.id, r.dp_over_alpha, r.a, r.b);
        out += buf;
    }
    return out;
}

}  // namespace bubblefield::runner
