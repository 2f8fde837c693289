#pragma once

#include "plap/ivp.hpp"

#include <optional>
#include <string>
#include <utility>

namespace plap {

enum class ShootMethod {
    /// Shoot on alpha = u(0) from the origin.
    Amplitude,
    /// n = 1, autonomous f only: shoot on the boundary slope s = -u'(1) from
    /// the boundary inward. Resolves solutions whose amplitude sits
    /// exponentially close to theta, where alpha itself is not representable.
    BoundarySlope,
    /// Amplitude first, boundary slope as the fallback when it applies.
    Automatic,
};

struct ShootOptions {
    IntegratorOptions integrator;
    double boundaryTol = 1e-9;
    /// Target |miss| for the root finder (the boundary-slope miss uses a tenth of it).
    double rootTol = 1e-13;
    ShootMethod method = ShootMethod::Automatic;
    /// Interior samples of the initial bracket used to flag multiple roots.
    int sweepSamples = 8;
    int maxIterations = 200;
    bool attachLinearized = true;
};

struct RadialSolution {
    ProblemSpec spec;
    double lambda = 0.0;
    double alpha = 0.0;
    RadialTrajectory trajectory;
    std::optional<LinearizedTrajectory> linearized;
    double uPrimeAtOne = 0.0;
    /// w(1) of the normalized linearization; NaN when it could not be built.
    double degeneracyMargin = 0.0;
    /// w(1) / max |w|: the scale-free form used by the degeneracy flag.
    double relativeMargin = 0.0;
    bool multiplicityRisk = false;
    bool monotoneNearRoot = true;
    ShootMethod method = ShootMethod::Amplitude;
    std::string note;
};

/// Signed boundary miss for amplitude alpha: u(1) when the trajectory reaches
/// r = 1, -(1 - r*) when u vanishes first at r*, and u at the turning point
/// when u' returns to zero while u > 0.
double missDistance(const ProblemSpec& spec, double lambda, double alpha,
                    const IntegratorOptions& options = {});

/// [theta (1 + 1e-3), 50 theta] when f changes sign, [1e-3, 50] otherwise.
std::pair<double, double> defaultAlphaBracket(const ProblemSpec& spec);

RadialSolution solveAtLambda(const ProblemSpec& spec, double lambda, std::pair<double, double> alphaBracket,
                             const ShootOptions& options = {});
RadialSolution solveAtLambda(const ProblemSpec& spec, double lambda, const ShootOptions& options = {});

/// Boundary-slope shooting; `logSlopeBracket` bounds log(-u'(1)).
RadialSolution solveByBoundarySlope(const ProblemSpec& spec, double lambda, const ShootOptions& options = {},
                                    std::optional<std::pair<double, double>> logSlopeBracket = std::nullopt);
bool boundarySlopeApplies(const ProblemSpec& spec);

/// Integrates at the given (lambda, alpha) to r = 1 and attaches the
/// linearization. No boundary check.
RadialSolution assembleSolution(const ProblemSpec& spec, double lambda, double alpha,
                                const ShootOptions& options = {});

struct ScalingResult {
    double lambda = 0.0;
    /// First zero of the lambda = 1 trajectory.
    double radius = 0.0;
    RadialSolution solution;
};

/// Integrates at lambda = 1 from alpha to the first zero R, sets lambda = R^p
/// and re-solves on [0, 1] at that lambda. Requires f independent of r.
ScalingResult solveAutonomousByScaling(const ProblemSpec& spec, double alpha, const ShootOptions& options = {});

struct DegeneracyVerdict {
    double margin = 0.0;
    bool degenerate = false;
};

/// margin = w(1); degenerate when |w(1)| < tolerance * max |w|.
DegeneracyVerdict isDegenerate(const RadialSolution& solution, double tolerance = 1e-6);

}  // namespace plap
