#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace plap {

/// Failure categories raised by the solver stack. The CLI maps these onto
/// exit codes, so keep the list stable.
enum class ErrorKind {
    InvalidArgument,
    Pole,
    DegenerateStart,
    StepUnderflow,
    SignConvention,
    BracketFailure,
    NoZeroReached,
    Admissibility,
    BoundaryMismatch,
    MarginCollapse,
    HypothesisFailure,
    Precondition,
    StepCollapse,
};

std::string_view toString(ErrorKind kind) noexcept;

class SolverError : public std::runtime_error {
public:
    SolverError(ErrorKind kind, const std::string& message,
                std::optional<double> location = std::nullopt);

    [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }
    /// Radius (or parameter value) where the failure was detected, when known.
    [[nodiscard]] std::optional<double> location() const noexcept { return location_; }

private:
    ErrorKind kind_;
    std::optional<double> location_;
};

}  // namespace plap
