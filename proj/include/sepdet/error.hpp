#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace sepdet {

enum class ErrorKind {
    UnknownPoint,
    NonPositiveRadius,
    BadShell,
    EmptyRegion,
    NoCoordinates,
    NotAChain,
    SpaceMismatch,
    IsolatedPoint,
    LipschitzViolation,
    UnknownSuite,
    MetricAxiomViolation,
    BadDescriptor,
    DepthExceeded,
    BudgetRequired,
};

std::string_view to_string(ErrorKind kind);

/// Single exception type for every domain failure; `kind()` tells them apart.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace sepdet
