#pragma once

// Compiled-in experiment presets. Every experiment number lives here.

#include "bubblefield/config.hpp"

#include <array>
#include <string>
#include <string_view>
#include <vector>

namespace bubblefield::presets {

std::vector<std::string> names();

/// Throws ConfigError for an unknown name.
config::RunConfig get(std::string_view name);

/// Published (a, b) formation results of the ten-bubble sweep, without and
/// with the electric field, indexed like the sweep dp/alpha = 0.2, ..., 2.0.
struct SemiAxes {
    double a;
    double b;
};
extern const std::array<SemiAxes, 10> kFormationTable;
extern const std::array<SemiAxes, 10> kEfieldTable;

}  // namespace bubblefield::presets
