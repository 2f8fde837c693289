#pragma once

#include "plap/shoot.hpp"

#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace plap {

enum class ParameterKind { Lambda, Theta };
std::string_view toString(ParameterKind kind) noexcept;

struct CurvePoint {
    double parameter = 0.0;
    double alpha = 0.0;
    double uPrimeAtOne = 0.0;
    /// Raw w(1) of the normalized linearization.
    double degeneracyMargin = 0.0;
    /// w(1) / max |w|.
    double relativeMargin = 0.0;
    /// (p-1)|u'(1)|^p / (p lambda). Equals F(alpha) when n = 1 and f = f(u),
    /// and stays resolvable when alpha - theta underflows.
    double amplitudeEnergy = 0.0;
    std::shared_ptr<const RadialSolution> solution;
};

struct CurveShape {
    int foldsDetected = 0;
    bool lambda0Finite = false;
    double lambda0 = std::numeric_limits<double>::infinity();
    bool alphaMonotone = true;
    /// alpha at the smallest and the largest parameter on the curve.
    double alphaLimitLow = 0.0;
    double alphaLimitHigh = 0.0;
    /// "f(0)<0", "f(0)=0" or "none".
    std::string templateMatch = "none";
    bool marginSignConstant = true;
    /// min |w(1)/max|w|| over its median along the curve.
    double marginFloorRatio = 1.0;
};

struct SolutionCurve {
    ProblemSpec spec;
    ParameterKind parameterKind = ParameterKind::Lambda;
    /// Strictly monotone in the parameter, in the order traversed.
    std::vector<CurvePoint> points;
    /// "completed" or "lambda0".
    std::string stopReason = "completed";
    CurveShape shape;
};

struct CurveOptions {
    ShootOptions shoot;
};

/// Natural continuation in lambda across [lo, hi], seeded at lo. The grid
/// is geometric when hi / lo >= 10. A failed step is retried with a cold
/// bracket; if that fails too the solvability edge is located with
/// detectLambda0 and the curve stops there.
SolutionCurve traceLambdaCurve(const ProblemSpec& spec, std::pair<double, double> lambdaRange, int steps,
                               const CurveOptions& options = {});

struct Lambda0Result {
    bool finite = false;
    double lambda0 = std::numeric_limits<double>::infinity();
    /// u'(1) of the last solution below lambda0 (at the bracket top when infinite).
    double uPrimeAtOne = 0.0;
    /// |u'(1)| decreased along the bisection.
    bool monotone = true;
    std::shared_ptr<const RadialSolution> solution;
    std::string note;
};

/// Bisection on solvability of the shooting family. Infinite when a solution
/// with |u'(1)| > 1e-4 exists at the bracket top.
Lambda0Result detectLambda0(const ProblemSpec& spec, std::pair<double, double> lambdaBracket,
                            const ShootOptions& options = {});

enum class HomotopyKind {
    /// PureB with b^theta.
    CoefficientPower,
    /// ModelAB with theta a; theta = 0 is PureB with the same b and q.
    LinearTermSwitch,
};

struct HomotopyOptions {
    ShootOptions shoot;
    /// Trace theta from 1 down to 0.
    bool reverse = false;
    /// Amplitude at the starting theta, e.g. the endpoint of a previous stage.
    std::optional<double> seedAlpha;
    /// Equispaced theta samples for the hypothesis audit.
    int auditPoints = 11;
    double marginTolerance = 1e-6;
    /// Smallest theta step tried before the tracer gives up.
    double minStep = 1e-8;
};

/// Member of the homotopy family at theta.
ProblemSpec homotopyMember(const ProblemSpec& start, HomotopyKind kind, double theta);

/// Continues the solution at lambda = start.lambda across theta in [0, 1].
/// Throws HypothesisFailure when an audited member fails, MarginCollapse when
/// a point has |w(1)| < marginTolerance max |w|.
SolutionCurve traceHomotopy(const ProblemSpec& start, HomotopyKind kind, int steps,
                            const HomotopyOptions& options = {});

/// Needs at least three points.
CurveShape classifyCurve(const SolutionCurve& curve);

}  // namespace plap
