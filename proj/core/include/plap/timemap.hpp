#pragma once

#include "plap/model.hpp"

#include <optional>
#include <utility>
#include <vector>

namespace plap {

/// gamma and theta of an autonomous f. Accepts f >= 0 near the origin
/// (gamma = theta = 0) or the pattern f < 0 on (0, gamma), f > 0 above;
/// anything else throws Admissibility.
CriticalAmplitudes criticalPoints(const Autonomous1D& f);

struct TimeMapOptions {
    double relTol = 1e-13;
    /// When set, composite 20-point Gauss-Legendre on this many equal panels
    /// replaces the adaptive Gauss-Kronrod rule.
    std::optional<int> fixedPanels;
};

struct TimeMapResult {
    double alpha = 0.0;
    double lambda = 0.0;
    /// (tau, integrand) pairs on the substituted variable.
    std::vector<std::pair<double, double>> integrandSamples;
    /// Relative error estimate of lambda.
    double quadratureErrorEstimate = 0.0;
};

/// lambda(alpha) of the half-interval problem from energy conservation:
/// lambda^{1/p} = int_0^alpha [p/(p-1) (F(alpha) - F(s))]^{-1/p} ds.
TimeMapResult timeMapLambda(const Autonomous1D& f, double p, double alpha, const TimeMapOptions& options = {});

}  // namespace plap
