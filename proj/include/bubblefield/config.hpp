#pragma once

// Run configuration: a flat INI text format (sections of key = value lines)
// that covers every experiment the CLI can run. format_config() writes every
// resolved value back out, so a written manifest re-runs identically.

#include "bubblefield/coupling.hpp"
#include "bubblefield/levelset.hpp"

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace bubblefield::config {

enum class Mode { NearOnly, FarOnly, Coupled, CoupledEfield, CdReference };

std::string_view to_string(Mode mode) noexcept;

struct BubbleSpec {
    int id = 0;
    std::optional<coupling::NearFieldSetup> near;        // solved for the ellipse
    std::optional<shape_fit::EllipseParams> ellipse;     // given directly (center unused)
    shape_fit::Point2 placement;
};

struct OscillationSettings {
    double k = 1.4;
    double p0 = 1.0;
};

struct RunConfig {
    std::string name = "custom";
    Mode mode = Mode::NearOnly;
    std::vector<BubbleSpec> bubbles;
    std::optional<levelset::Grid2D> grid;
    levelset::TransportParams transport;
    std::optional<young_laplace::EFieldParams> efield;
    OscillationSettings oscillation;
    std::optional<levelset::CylindricalParams> cylindrical;
    std::vector<double> times;
    std::size_t refresh_every = 50;  // 0: never refresh
    levelset::InitMode init_mode = levelset::InitMode::Union;
    std::string output_dir = "out";

    /// Throws ConfigError naming the offending key when a mode-required
    /// section is missing or a value is out of range.
    void validate() const;
};

/// Parses the INI text. Unknown sections or keys and malformed values are
/// ConfigError, with the message naming `section.key`.
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::filesystem::path& path);

/// Every resolved field, doubles at 17 significant digits.
std::string format_config(const RunConfig& cfg);

}  // namespace bubblefield::config
