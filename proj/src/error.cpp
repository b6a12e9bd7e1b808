#include "sepdet/error.hpp"

namespace sepdet {

std::string_view to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::UnknownPoint: return "UnknownPoint";
        case ErrorKind::NonPositiveRadius: return "NonPositiveRadius";
        case ErrorKind::BadShell: return "BadShell";
        case ErrorKind::EmptyRegion: return "EmptyRegion";
        case ErrorKind::NoCoordinates: return "NoCoordinates";
        case ErrorKind::NotAChain: return "NotAChain";
        case ErrorKind::SpaceMismatch: return "SpaceMismatch";
        case ErrorKind::IsolatedPoint: return "IsolatedPoint";
        case ErrorKind::LipschitzViolation: return "LipschitzViolation";
        case ErrorKind::UnknownSuite: return "UnknownSuite";
        case ErrorKind::MetricAxiomViolation: return "MetricAxiomViolation";
        case ErrorKind::BadDescriptor: return "BadDescriptor";
        case ErrorKind::DepthExceeded: return "DepthExceeded";
        case ErrorKind::BudgetRequired: return "BudgetRequired";
    }
    return "Unknown";
}

}  // namespace sepdet
