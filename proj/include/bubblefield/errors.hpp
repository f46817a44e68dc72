#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace bubblefield {

enum class ErrorCode {
    SingularSystem,
    MeshTooCoarse,
    IntegrationFailure,
    AxisSingularity,
    NewtonDivergence,
    NoClosure,
    ZeroSurfaceTension,
    DegenerateProfile,
    CflViolation,
    EmptyBubbleList,
    ImaginaryFrequency,
    LostBubble,
    InvalidArgument,
    ConfigError,
    IoError,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Library-wide exception. `module()` names the component that raised it
/// (e.g. "bvp_core", "levelset") so the CLI can report where a run failed.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, std::string module, const std::string& message);

    ErrorCode code() const noexcept { return code_; }
    const std::string& module() const noexcept { return module_; }
    /// Message without the "Code [module]: " prefix.
    const std::string& detail() const noexcept { return detail_; }

private:
    ErrorCode code_;
    std::string module_;
    std::string detail_;
};

/// Raised by per-bubble pipelines; carries the bubble id (and cycle index
/// when it happened inside the coupled loop).
class BubbleError : public Error {
public:
    BubbleError(const Error& cause, int bubble_id, int cycle = -1);

    int bubble_id() const noexcept { return bubble_id_; }
    int cycle() const noexcept { return cycle_; }

private:
    int bubble_id_;
    int cycle_;
};

}  // namespace bubblefield
