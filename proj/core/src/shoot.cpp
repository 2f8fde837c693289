#include "plap/shoot.hpp"

#include "dopri5.hpp"
#include "plap/error.hpp"
#include "plap/phi.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace plap {
namespace {

using detail::State;

bool sameSign(double a, double b) { return (a > 0.0) == (b > 0.0); }

struct RootResult {
    double x = 0.0;
    double value = 0.0;
};

// Bisection down to a relative width of 1e-3, then Illinois steps.
template <class G>
RootResult hybridRoot(G&& g, double a, double fa, double b, double fb, double tol, int maxIterations) {
    for (int it = 0; it < maxIterations && b - a > 1e-3 * std::max(1.0, std::abs(a)); ++it) {
        const double mid = 0.5 * (a + b);
        const double fm = g(mid);
        if (fm == 0.0) return {mid, 0.0};
        if (sameSign(fm, fa)) {
            a = mid;
            fa = fm;
        } else {
            b = mid;
            fb = fm;
        }
    }
    RootResult best = std::abs(fa) < std::abs(fb) ? RootResult{a, fa} : RootResult{b, fb};
    int side = 0;
    for (int it = 0; it < maxIterations; ++it) {
        if (std::abs(best.value) <= tol) break;
        if (b - a <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(std::abs(a), std::abs(b))) break;
        double c = (a * fb - b * fa) / (fb - fa);
        if (!(c > a && c < b)) c = 0.5 * (a + b);
        const double fc = g(c);
        if (std::abs(fc) < std::abs(best.value)) best = {c, fc};
        if (fc == 0.0) break;
        if (sameSign(fc, fb)) {
            b = c;
            fb = fc;
            if (side == -1) fa *= 0.5;
            side = -1;
        } else {
            a = c;
            fa = fc;
            if (side == 1) fb *= 0.5;
            side = 1;
        }
    }
    return best;
}

// Locates one sign change of g on [lo, hi], sampling `samples` interior points
// when the endpoints agree. Returns the number of sign changes seen.
template <class G>
int sweepForSignChange(G&& g, double& lo, double& flo, double& hi, double& fhi, int samples, bool geometric) {
    std::vector<double> xs{lo};
    for (int k = 1; k <= samples; ++k) {
        const double t = static_cast<double>(k) / (samples + 1);
        xs.push_back(geometric && lo > 0.0 ? lo * std::pow(hi / lo, t) : lo + t * (hi - lo));
    }
    xs.push_back(hi);
    std::vector<double> gs(xs.size());
    gs.front() = flo;
    gs.back() = fhi;
    for (std::size_t k = 1; k + 1 < xs.size(); ++k) gs[k] = g(xs[k]);
    int changes = 0;
    std::optional<std::size_t> first;
    for (std::size_t k = 0; k + 1 < xs.size(); ++k) {
        if (!sameSign(gs[k], gs[k + 1])) {
            ++changes;
            if (!first) first = k;
        }
    }
    if (first) {
        lo = xs[*first];
        flo = gs[*first];
        hi = xs[*first + 1];
        fhi = gs[*first + 1];
    }
    return changes;
}

double primitiveScale(const PowerSum& F, double x) { return std::max(F.magnitude(x), 1e-300); }

// State of the inward boundary-slope integration: U(t) = u(1 - t), V = phi(U_t).
struct InwardRun {
    double length = std::numeric_limits<double>::infinity();  // t where V returns to zero
    bool turned = false;
    std::vector<double> t;
    std::vector<State> y;
    std::vector<DenseTrack::Segment> segments;
    double errorEstimate = 0.0;
};

InwardRun integrateInward(const ProblemSpec& spec, double lambda, double slope, const IntegratorOptions& opt,
                          double tMax, bool keepPath) {
    const double p = spec.exponents.p;
    auto rhs = [&](double, const State& y) -> State {
        return {phiInverse(y[1], p), -lambda * evalExtended(spec, 0.0, y[0]).f};
    };
    const double v0 = phi(slope, p);
    // Scale-aware absolute floor: the inward problem starts at amplitude ~slope,
    // which may be many orders below the default floor.
    const double floorU = opt.absTol * std::min(1.0, slope);
    const double floorV = opt.absTol * std::min(1.0, v0);
    auto scale = [&](int i, double a, double b) {
        return (i == 0 ? floorU : floorV) + opt.relTol * std::max(std::abs(a), std::abs(b));
    };

    InwardRun run;
    State y{0.0, v0};
    double t = 0.0;
    State k1 = rhs(t, y);
    double h = std::min(1e-3, tMax);
    if (keepPath) {
        run.t.push_back(t);
        run.y.push_back(y);
    }
    std::size_t steps = 0;
    while (t < tMax) {
        if (++steps > opt.maxSteps) throw SolverError(ErrorKind::StepUnderflow, "inward step budget exhausted", t);
        h = std::min(h, tMax - t);
        auto step = detail::dopri5Step(rhs, t, y, k1, h, scale);
        if (!std::isfinite(step.errorNorm)) step.errorNorm = 1e10;
        if (step.errorNorm > 1.0) {
            h *= std::min(1.0, detail::stepFactor(step.errorNorm));
            if (h < 1e-15 * std::max(1.0, t))
                throw SolverError(ErrorKind::StepUnderflow, "inward step size underflow", t);
            continue;
        }
        if (step.y1[1] <= 0.0) {
            const auto& seg = step.segment;
            double a = t, b = t + h;
            for (int it = 0; it < 200 && b - a > 1e-15 * std::max(1.0, b); ++it) {
                const double mid = 0.5 * (a + b);
                if (seg.eval(mid)[1] > 0.0) a = mid;
                else b = mid;
            }
            const double tTurn = 0.5 * (a + b);
            run.turned = true;
            run.length = tTurn;
            if (keepPath && tTurn > t) {
                auto exact = detail::dopri5Step(rhs, t, y, k1, tTurn - t, scale);
                run.segments.push_back(exact.segment);
                run.errorEstimate += std::abs(exact.errorVector[0]);
                run.t.push_back(tTurn);
                run.y.push_back(exact.y1);
            }
            return run;
        }
        if (keepPath) {
            run.segments.push_back(step.segment);
            run.errorEstimate += std::abs(step.errorVector[0]);
        }
        t += h;
        y = step.y1;
        k1 = step.k7;
        if (keepPath) {
            run.t.push_back(t);
            run.y.push_back(y);
        }
        h *= detail::stepFactor(step.errorNorm);
    }
    return run;
}

// Converts an inward run of length ~1 into a radial trajectory on [eps, 1].
RadialTrajectory radialFromInward(const ProblemSpec& spec, double lambda, const InwardRun& run, double eps) {
    RadialTrajectory traj;
    traj.p = spec.exponents.p;
    traj.n = 1;
    traj.lambda = lambda;
    traj.alpha = run.y.back()[0];
    traj.errorEstimate = run.errorEstimate;
    for (const auto& s : run.segments) {
        DenseTrack::Segment seg = s;
        seg.r0 = 1.0 - (s.r0 + s.h);
        seg.reversed = true;
        seg.sign = {1.0, -1.0};
        traj.dense.append(seg);
    }
    traj.dense.sortSegments();
    auto push = [&](double r, double u, double v) {
        traj.r.push_back(r);
        traj.u.push_back(u);
        traj.v.push_back(v);
        traj.uPrime.push_back(phiInverse(v, traj.p));
    };
    const auto atEps = traj.dense(eps);
    push(eps, atEps[0], atEps[1]);
    for (std::size_t k = run.t.size(); k-- > 0;) {
        const double r = 1.0 - run.t[k];
        if (r <= eps * 1.5) continue;
        push(r, run.y[k][0], -run.y[k][1]);
    }
    traj.u.back() = 0.0;
    traj.stop = StopReason::ReachedEnd;
    return traj;
}

void attachLinearization(RadialSolution& sol, const ShootOptions& options) {
    sol.uPrimeAtOne = sol.trajectory.uPrimeEnd();
    sol.degeneracyMargin = std::numeric_limits<double>::quiet_NaN();
    sol.relativeMargin = std::numeric_limits<double>::quiet_NaN();
    if (!options.attachLinearized) return;
    try {
        sol.linearized = integrateLinearized(sol.spec, sol.lambda, sol.trajectory, options.integrator);
        sol.degeneracyMargin = sol.linearized->margin();
        sol.relativeMargin = sol.degeneracyMargin / sol.linearized->maxAbsW();
    } catch (const SolverError& e) {
        if (!sol.note.empty()) sol.note += "; ";
        sol.note += std::string("linearization unavailable: ") + e.what();
    }
}

std::optional<double> thetaOf(const ProblemSpec& spec) {
    const CriticalAmplitudes c = criticalAmplitudes(spec, 0.0);
    if (c.theta > 0.0) return c.theta;
    return std::nullopt;
}

RadialSolution solveByAmplitude(const ProblemSpec& spec, double lambda, std::pair<double, double> bracket,
                                const ShootOptions& options) {
    auto [lo, hi] = bracket;
    if (!(lo > 0.0 && hi > lo))
        throw SolverError(ErrorKind::InvalidArgument, "alpha bracket must satisfy 0 < lo < hi");
    auto miss = [&](double a) { return missDistance(spec, lambda, a, options.integrator); };
    double flo = miss(lo), fhi = miss(hi);
    const int changes = sweepForSignChange(miss, lo, flo, hi, fhi, options.sweepSamples, hi / lo > 10.0);
    if (changes == 0) {
        std::ostringstream os;
        os << "no sign change of the boundary miss for alpha in [" << bracket.first << ", " << bracket.second
           << "] at lambda = " << lambda;
        throw SolverError(ErrorKind::BracketFailure, os.str(), lambda);
    }
    const RootResult root = hybridRoot(miss, lo, flo, hi, fhi, options.rootTol, options.maxIterations);

    RadialSolution sol = assembleSolution(spec, lambda, root.x, options);
    sol.multiplicityRisk = changes > 1;
    const double d = 1e-6 * root.x;
    const double below = miss(root.x - d), above = miss(root.x + d);
    sol.monotoneNearRoot = !sameSign(below, above);
    if (sol.multiplicityRisk) sol.note = "several sign changes of the boundary miss inside the bracket";
    if (!(std::abs(sol.trajectory.uEnd()) < options.boundaryTol)) {
        std::ostringstream os;
        os << "amplitude shooting converged to alpha = " << root.x << " but |u(1)| = "
           << std::abs(sol.trajectory.uEnd());
        throw SolverError(ErrorKind::BoundaryMismatch, os.str(), lambda);
    }
    return sol;
}

}  // namespace

double missDistance(const ProblemSpec& spec, double lambda, double alpha, const IntegratorOptions& options) {
    IntegratorOptions opt = options;
    opt.stopAtZero = true;
    opt.stopAtTurn = true;
    const RadialTrajectory t = integrateRadial(spec, lambda, alpha, 1.0, opt);
    switch (t.stop) {
        case StopReason::ReachedEnd: return t.uEnd();
        case StopReason::FirstZeroOfU: return -(1.0 - t.rEnd());
        case StopReason::ZeroOfUPrime:
        case StopReason::IncreasingStart: return t.uEnd();
    }
    return t.uEnd();
}

std::pair<double, double> defaultAlphaBracket(const ProblemSpec& spec) {
    if (auto theta = thetaOf(spec)) return {*theta * (1.0 + 1e-3), 50.0 * *theta};
    return {1e-3, 50.0};
}

bool boundarySlopeApplies(const ProblemSpec& spec) { return spec.exponents.n == 1 && isAutonomous(spec); }

RadialSolution assembleSolution(const ProblemSpec& spec, double lambda, double alpha, const ShootOptions& options) {
    IntegratorOptions opt = options.integrator;
    opt.stopAtZero = false;
    opt.stopAtTurn = false;
    RadialSolution sol;
    sol.spec = spec;
    sol.spec.lambda = lambda;
    sol.lambda = lambda;
    sol.alpha = alpha;
    sol.method = ShootMethod::Amplitude;
    sol.trajectory = integrateRadial(spec, lambda, alpha, 1.0, opt);
    attachLinearization(sol, options);
    return sol;
}

RadialSolution solveAtLambda(const ProblemSpec& spec, double lambda, std::pair<double, double> alphaBracket,
                             const ShootOptions& options) {
    if (!(lambda > 0.0)) throw SolverError(ErrorKind::InvalidArgument, "lambda must be positive");
    if (options.method == ShootMethod::BoundarySlope) return solveByBoundarySlope(spec, lambda, options);
    const bool fallback = options.method == ShootMethod::Automatic && boundarySlopeApplies(spec);
    if (!fallback) return solveByAmplitude(spec, lambda, alphaBracket, options);

    try {
        RadialSolution sol = solveByAmplitude(spec, lambda, alphaBracket, options);
        // Amplitudes this close to theta carry too few significant digits.
        const auto theta = thetaOf(spec);
        if (!theta || sol.alpha > *theta * (1.0 + 1e-4)) return sol;
    } catch (const SolverError& e) {
        if (e.kind() != ErrorKind::BracketFailure && e.kind() != ErrorKind::BoundaryMismatch &&
            e.kind() != ErrorKind::StepUnderflow)
            throw;
    }
    return solveByBoundarySlope(spec, lambda, options);
}

RadialSolution solveAtLambda(const ProblemSpec& spec, double lambda, const ShootOptions& options) {
    return solveAtLambda(spec, lambda, defaultAlphaBracket(spec), options);
}

RadialSolution solveByBoundarySlope(const ProblemSpec& spec, double lambda, const ShootOptions& options,
                                    std::optional<std::pair<double, double>> logSlopeBracket) {
    if (!boundarySlopeApplies(spec))
        throw SolverError(ErrorKind::Precondition, "boundary-slope shooting needs n = 1 and f independent of r");
    if (!(lambda > 0.0)) throw SolverError(ErrorKind::InvalidArgument, "lambda must be positive");
    constexpr double kMaxLength = 2.0;
    auto miss = [&](double logSlope) {
        const InwardRun run = integrateInward(spec, lambda, std::exp(logSlope), options.integrator, kMaxLength, false);
        return run.turned ? run.length - 1.0 : kMaxLength - 1.0;
    };

    double lo = std::log(1e-100), hi = std::log(1e6);
    int samples = 40;
    if (logSlopeBracket) {
        lo = logSlopeBracket->first;
        hi = logSlopeBracket->second;
        samples = options.sweepSamples;
    }
    double flo = miss(lo), fhi = miss(hi);
    int changes = sweepForSignChange(miss, lo, flo, hi, fhi, samples, false);
    if (changes == 0 && logSlopeBracket) {
        lo = std::log(1e-100);
        hi = std::log(1e6);
        flo = miss(lo);
        fhi = miss(hi);
        changes = sweepForSignChange(miss, lo, flo, hi, fhi, 40, false);
    }
    if (changes == 0) {
        std::ostringstream os;
        os << "no boundary slope gives a positive solution at lambda = " << lambda;
        throw SolverError(ErrorKind::BracketFailure, os.str(), lambda);
    }
    const RootResult root = hybridRoot(miss, lo, flo, hi, fhi, 0.1 * options.rootTol, options.maxIterations);

    const InwardRun run = integrateInward(spec, lambda, std::exp(root.x), options.integrator, kMaxLength, true);
    if (!run.turned || std::abs(run.length - 1.0) > 1e-9)
        throw SolverError(ErrorKind::BoundaryMismatch, "boundary-slope shooting did not converge", lambda);

    RadialSolution sol;
    sol.spec = spec;
    sol.spec.lambda = lambda;
    sol.lambda = lambda;
    sol.method = ShootMethod::BoundarySlope;
    sol.trajectory = radialFromInward(spec, lambda, run, options.integrator.startupOffset);
    // Energy conservation pins alpha more sharply than the integrated path:
    // lambda F(alpha) = (p-1)/p s^p.
    {
        const PowerSum f = *autonomousProfile(spec);
        const PowerSum F = f.antiderivative();
        const double p = spec.exponents.p;
        const double level = (p - 1.0) / p * std::pow(std::exp(root.x), p) / lambda;
        double a = sol.trajectory.alpha;
        for (int it = 0; it < 4; ++it) {
            const double fa = f(a);
            if (!(fa > 0.0)) break;
            a -= (F(a) - level) / fa;
        }
        if (std::isfinite(a) && std::abs(a - sol.trajectory.alpha) < 1e-6 * sol.trajectory.alpha) {
            sol.trajectory.alpha = a;
        }
    }
    sol.alpha = sol.trajectory.alpha;
    sol.multiplicityRisk = changes > 1;
    const double d = 1e-6;
    sol.monotoneNearRoot = !sameSign(miss(root.x - d), miss(root.x + d));
    if (sol.multiplicityRisk) sol.note = "several sign changes of the boundary-slope miss";
    attachLinearization(sol, options);
    return sol;
}

ScalingResult solveAutonomousByScaling(const ProblemSpec& spec, double alpha, const ShootOptions& options) {
    const auto profile = autonomousProfile(spec);
    if (!profile) throw SolverError(ErrorKind::Precondition, "scaling solver needs f independent of r");
    if (!(alpha > 0.0)) throw SolverError(ErrorKind::InvalidArgument, "alpha must be positive");
    const PowerSum F = profile->antiderivative();
    if (!(F(alpha) > 1e-12 * primitiveScale(F, alpha))) {
        std::ostringstream os;
        os << "F(alpha) = " << F(alpha) << " is not positive: the trajectory cannot reach zero";
        throw SolverError(ErrorKind::NoZeroReached, os.str(), alpha);
    }
    IntegratorOptions opt = options.integrator;
    const RadialTrajectory t = integrateToFirstZero(spec, 1.0, alpha, 1e3, opt);
    if (t.stop != StopReason::FirstZeroOfU) {
        std::ostringstream os;
        os << "trajectory from alpha = " << alpha << " has no zero (stopped at r = " << t.rEnd() << ")";
        throw SolverError(ErrorKind::NoZeroReached, os.str(), alpha);
    }
    ScalingResult out;
    out.radius = t.rEnd();
    out.lambda = std::pow(out.radius, spec.exponents.p);
    out.solution = assembleSolution(spec, out.lambda, alpha, options);
    if (!(std::abs(out.solution.trajectory.uEnd()) < 1e-8)) {
        std::ostringstream os;
        os << "rescaled solution misses the boundary: u(1) = " << out.solution.trajectory.uEnd();
        throw SolverError(ErrorKind::BoundaryMismatch, os.str(), out.lambda);
    }
    return out;
}

DegeneracyVerdict isDegenerate(const RadialSolution& solution, double tolerance) {
    DegeneracyVerdict v;
    v.margin = solution.degeneracyMargin;
    if (!solution.linearized) {
        v.degenerate = true;
        return v;
    }
    v.degenerate = std::abs(v.margin) < tolerance * solution.linearized->maxAbsW();
    return v;
}

}  // namespace plap
