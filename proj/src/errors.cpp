#include "bubblefield/errors.hpp"

namespace bubblefield {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::SingularSystem: return "SingularSystem";
        case ErrorCode::MeshTooCoarse: return "MeshTooCoarse";
        case ErrorCode::IntegrationFailure: return "IntegrationFailure";
        case ErrorCode::AxisSingularity: return "AxisSingularity";
        case ErrorCode::NewtonDivergence: return "NewtonDivergence";
        case ErrorCode::NoClosure: return "NoClosure";
        case ErrorCode::ZeroSurfaceTension: return "ZeroSurfaceTension";
        case ErrorCode::DegenerateProfile: return "DegenerateProfile";
        case ErrorCode::CflViolation: return "CflViolation";
        case ErrorCode::EmptyBubbleList: return "EmptyBubbleList";
        case ErrorCode::ImaginaryFrequency: return "ImaginaryFrequency";
        case ErrorCode::LostBubble: return "LostBubble";
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::ConfigError: return "ConfigError";
        case ErrorCode::IoError: return "IoError";
    }
    return "Unknown";
}

Error::Error(ErrorCode code, std::string module, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + " [" + module + "]: " + message),
      code_(code),
      module_(std::move(module)),
      detail_(message) {}

namespace {
std::string bubble_message(const Error& cause, int bubble_id, int cycle) {
    std::string msg = "bubble " + std::to_string(bubble_id);
    if (cycle >= 0) msg += " (cycle " + std::to_string(cycle) + ")";
    return msg + ": " + cause.detail();
}
}  // namespace

BubbleError::BubbleError(const Error& cause, int bubble_id, int cycle)
    : Error(cause.code(), cause.module(), bubble_message(cause, bubble_id, cycle)),
      bubble_id_(bubble_id),
      cycle_(cycle) {}

}  // namespace bubblefield
