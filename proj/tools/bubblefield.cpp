// bubblefield: run experiment presets or config files, print formation tables.

#include "bubblefield/errors.hpp"
#include "bubblefield/presets.hpp"
#include "bubblefield/runner.hpp"

#include <CLI11.hpp>
#include <omp.h>

#include <cstdlib>
#include <iostream>
#include <string>

namespace {

using namespace bubblefield;

constexpr int kConfigError = 1;
constexpr int kNumericalError = 2;

struct Source {
    std::string preset;
    std::string config_path;
};

void add_source(CLI::App& cmd, Source& src) {
    auto* preset = cmd.add_option("--preset", src.preset, "Compiled-in experiment")
                       ->check(CLI::IsMember(presets::names()));
    auto* file = cmd.add_option("--config", src.config_path, "INI run configuration")->check(CLI::ExistingFile);
    preset->excludes(file);
    file->excludes(preset);
}

config::RunConfig resolve(const Source& src) {
    if (!src.preset.empty()) return presets::get(src.preset);
    if (!src.config_path.empty()) return config::load_config(src.config_path);
    throw Error(ErrorCode::ConfigError, "config", "run: one of --preset or --config is required");
}

// BUBBLEFIELD_THREADS caps the OpenMP team size.
void apply_thread_cap() {
    const char* env = std::getenv("BUBBLEFIELD_THREADS");
    if (env == nullptr || *env == '\0') return;
    char* end = nullptr;
    const long n = std::strtol(env, &end, 10);
    if (*end != '\0' || n < 1) {
        throw Error(ErrorCode::ConfigError, "config",
                    "BUBBLEFIELD_THREADS: expected a positive integer, got '" + std::string(env) + "'");
    }
    omp_set_num_threads(static_cast<int>(n));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bubble formation and transport: near-field Young-Laplace profiles, level-set far field"};
    app.require_subcommand(1);

    Source run_src;
    std::string out_dir;
    bool seed_doc = false;
    auto* run_cmd = app.add_subcommand("run", "Run a preset or config file and write its output files");
    add_source(*run_cmd, run_src);
    run_cmd->add_option("--out", out_dir, "Output directory (default: the config's output_dir)");
    run_cmd->add_flag("--seed-doc", seed_doc, "Print the resolved configuration and exit");

    Source table_src;
    bool csv = false;
    auto* table_cmd = app.add_subcommand("table", "Print the fitted (a, b) per bubble");
    add_source(*table_cmd, table_src);
    table_cmd->add_flag("--csv", csv, "Comma-separated output");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kConfigError;
    }

    try {
        apply_thread_cap();
        if (run_cmd->parsed()) {
            auto cfg = resolve(run_src);
            if (!out_dir.empty()) cfg.output_dir = out_dir;
            if (seed_doc) {
                std::cout << config::format_config(cfg);
                return 0;
            }
            const auto result = runner::run(cfg, cfg.output_dir);
            for (const auto& w : result.warnings) std::cerr << "warning: " << w << "\n";
            for (const auto& f : result.files) std::cout << f.string() << "\n";
        } else {
            const auto cfg = resolve(table_src);
            std::cout << runner::format_table(runner::table(cfg), csv);
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.code() == ErrorCode::ConfigError ? kConfigError : kNumericalError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kNumericalError;
    }
    return 0;
}
