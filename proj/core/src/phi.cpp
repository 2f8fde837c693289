#include "plap/phi.hpp"

#include "plap/error.hpp"

#include <cmath>

namespace plap {

std::string_view toString(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::InvalidArgument: return "invalid-argument";
        case ErrorKind::Pole: return "pole";
        case ErrorKind::DegenerateStart: return "degenerate-start";
        case ErrorKind::StepUnderflow: return "step-underflow";
        case ErrorKind::SignConvention: return "sign-convention";
        case ErrorKind::BracketFailure: return "bracket-failure";
        case ErrorKind::NoZeroReached: return "no-zero-reached";
        case ErrorKind::Admissibility: return "admissibility";
        case ErrorKind::BoundaryMismatch: return "boundary-mismatch";
        case ErrorKind::MarginCollapse: return "margin-collapse";
        case ErrorKind::HypothesisFailure: return "hypothesis-failure";
        case ErrorKind::Precondition: return "precondition";
        case ErrorKind::StepCollapse: return "step-collapse";
    }
    return "unknown";
}

SolverError::SolverError(ErrorKind kind, const std::string& message,
                         std::optional<double> location)
    : std::runtime_error(std::string(toString(kind)) + ": " + message),
      kind_(kind), location_(location) {}

double phi(double t, double p) {
    if (t == 0.0) return 0.0;
    if (p == 2.0) return t;
    return std::copysign(std::pow(std::abs(t), p - 1.0), t);
}

double phiDerivative(double t, double p) {
    if (p == 2.0) return 1.0;
    if (t == 0.0) {
        if (p < 2.0)
            throw SolverError(ErrorKind::Pole, "phi'(0) is infinite for p < 2", 0.0);
        return 0.0;
    }
    return (p - 1.0) * std::pow(std::abs(t), p - 2.0);
}

double phiInverse(double s, double p) {
    if (s == 0.0) return 0.0;
    if (p == 2.0) return s;
    return std::copysign(std::pow(std::abs(s), 1.0 / (p - 1.0)), s);
}

}  // namespace plap
