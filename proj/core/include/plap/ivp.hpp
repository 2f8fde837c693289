#pragma once

#include "plap/dense_output.hpp"
#include "plap/model.hpp"

#include <optional>
#include <vector>

namespace plap {

struct IntegratorOptions {
    double relTol = 1e-10;
    double absTol = 1e-12;
    /// Radius where the frontier series hands over to the integrator.
    double startupOffset = 1e-6;
    /// Stop at the first zero of u (otherwise record it and keep going).
    bool stopAtZero = true;
    /// Stop when u' returns to zero after the start.
    bool stopAtTurn = true;
    std::size_t maxSteps = 500000;
};

enum class EventKind { FirstZeroOfU, ZeroOfUPrime };

struct TrajectoryEvent {
    EventKind kind;
    double r;
};

enum class StopReason {
    ReachedEnd,
    FirstZeroOfU,
    ZeroOfUPrime,
    /// f(0, alpha) < 0: u leaves the origin increasing, which no positive
    /// solution does. The trajectory holds only the startup node.
    IncreasingStart,
};

/// Values at r = epsilon from the frontier series of the once-integrated
/// equation, for both the radial problem and its linearization.
struct StartupValues {
    double r = 0.0;
    double u = 0.0;
    double uPrime = 0.0;
    double v = 0.0;
    double w = 0.0;
    double wPrime = 0.0;
    double z = 0.0;
};

StartupValues seriesStartup(const ProblemSpec& spec, double lambda, double alpha, double epsilon);

/// Discretized path (r, u, u', v = r^{n-1} phi(u')) leaving the origin with
/// u(0) = alpha, u'(0) = 0. Nodes start at the startup offset; the origin
/// values are implied by `alpha`.
struct RadialTrajectory {
    double p = 2.0;
    int n = 1;
    double lambda = 1.0;
    double alpha = 0.0;
    std::vector<double> r;
    std::vector<double> u;
    std::vector<double> uPrime;
    std::vector<double> v;
    std::vector<TrajectoryEvent> events;
    StopReason stop = StopReason::ReachedEnd;
    /// Sum of the embedded local error estimates of u over accepted steps.
    double errorEstimate = 0.0;
    /// Continuous extension of (u, v); empty for hand-built trajectories.
    DenseTrack dense;

    [[nodiscard]] std::size_t size() const { return r.size(); }
    [[nodiscard]] double rEnd() const { return r.back(); }
    [[nodiscard]] double uEnd() const { return u.back(); }
    [[nodiscard]] double uPrimeEnd() const { return uPrime.back(); }
    [[nodiscard]] std::optional<double> firstEvent(EventKind kind) const;
    /// (u, u') at r from the dense output, falling back to linear
    /// interpolation of the nodes.
    [[nodiscard]] std::array<double, 2> stateAt(double r) const;
};

/// Integrates u' = phiInverse(v / r^{n-1}), v' = -lambda r^{n-1} f(r, u) from
/// the startup offset to rEnd in (0, 1].
RadialTrajectory integrateRadial(const ProblemSpec& spec, double lambda, double alpha, double rEnd,
                                 const IntegratorOptions& options = {});

/// Like integrateRadial with no upper bound on the radius; stops at the first
/// zero of u (or a turn of u). Used by the scaling solver.
RadialTrajectory integrateToFirstZero(const ProblemSpec& spec, double lambda, double alpha,
                                      double maxRadius, IntegratorOptions options = {});

/// Linearized trajectory (w, w', z = r^{n-1} phi'(u') w') on the parent grid.
struct LinearizedTrajectory {
    std::vector<double> r;
    std::vector<double> w;
    std::vector<double> wPrime;
    std::vector<double> z;
    double w0 = 1.0;
    DenseTrack dense;  // (w, z), possibly finer than the parent grid

    /// w at the last node: the degeneracy margin.
    [[nodiscard]] double margin() const { return w.back(); }
    [[nodiscard]] double maxAbsW() const;
};

/// Integrates w' = z / (r^{n-1} phi'(u')), z' = -lambda r^{n-1} f_u(r, u) w
/// along the parent's dense output. `w0` is w(0); the default 1 is the
/// normalized trajectory. Throws SignConvention when u' vanishes inside the
/// parent's range.
LinearizedTrajectory integrateLinearized(const ProblemSpec& spec, double lambda,
                                         const RadialTrajectory& parent,
                                         const IntegratorOptions& options = {}, double w0 = 1.0);

/// Energy (p-1)/p |u'|^p + lambda F(r, u) at every node.
std::vector<double> energyProfile(const ProblemSpec& spec, const RadialTrajectory& trajectory);

}  // namespace plap
