#include "plap/ivp.hpp"

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

double radialWeight(double r, int n) {
    switch (n) {
        case 1: return 1.0;
        case 2: return r;
        case 3: return r * r;
        default: return std::pow(r, n - 1);
    }
}

// Root of g on [a, b] with g(a), g(b) of opposite sign, by bisection to 1e-14 in r.
template <class G>
double bracketRoot(G&& g, double a, double b) {
    double ga = g(a);
    for (int it = 0; it < 200 && b - a > 1e-14 * std::max(1.0, std::abs(b)); ++it) {
        const double mid = 0.5 * (a + b);
        const double gm = g(mid);
        if (gm == 0.0) return mid;
        if ((gm > 0.0) == (ga > 0.0)) {
            a = mid;
            ga = gm;
        } else {
            b = mid;
        }
    }
    return 0.5 * (a + b);
}

struct RadialRhs {
    const ProblemSpec& spec;
    double lambda;
    double p;
    int n;

    State operator()(double r, const State& y) const {
        const double weight = radialWeight(r, n);
        const double uPrime = phiInverse(y[1] / weight, p);
        const double f = evalExtended(spec, r, y[0]).f;
        return {uPrime, -lambda * weight * f};
    }
};

RadialTrajectory integrateCore(const ProblemSpec& spec, double lambda, double alpha, double rEnd,
                               const IntegratorOptions& opt) {
    const double p = spec.exponents.p;
    const int n = spec.exponents.n;
    const double eps = opt.startupOffset;
    if (!(eps > 0.0 && eps <= 1e-3))
        throw SolverError(ErrorKind::InvalidArgument, "startup offset must lie in (0, 1e-3]");
    if (!(rEnd > eps)) throw SolverError(ErrorKind::InvalidArgument, "rEnd must exceed the startup offset");

    RadialTrajectory traj;
    traj.p = p;
    traj.n = n;
    traj.lambda = lambda;
    traj.alpha = alpha;

    const StartupValues start = seriesStartup(spec, lambda, alpha, eps);
    auto pushNode = [&](double r, const State& y) {
        traj.r.push_back(r);
        traj.u.push_back(y[0]);
        traj.v.push_back(y[1]);
        traj.uPrime.push_back(phiInverse(y[1] / radialWeight(r, n), p));
    };
    State y{start.u, start.v};
    double r = eps;
    pushNode(r, y);
    if (start.v > 0.0) {
        traj.stop = StopReason::IncreasingStart;
        traj.events.push_back({EventKind::ZeroOfUPrime, eps});
        return traj;
    }

    RadialRhs rhs{spec, lambda, p, n};
    auto scale = [&](int, double a, double b) { return opt.absTol + opt.relTol * std::max(std::abs(a), std::abs(b)); };

    State k1 = rhs(r, y);
    double h = std::min(eps, rEnd - r);
    bool zeroRecorded = false;
    std::size_t steps = 0;

    while (true) {
        if (++steps > opt.maxSteps)
            throw SolverError(ErrorKind::StepUnderflow, "step budget exhausted", r);
        const bool lastStep = r + h >= rEnd;
        if (lastStep) h = rEnd - r;
        detail::StepOutcome step = detail::dopri5Step(rhs, r, y, k1, h, scale);
        if (!std::isfinite(step.errorNorm)) step.errorNorm = 1e10;

        if (step.errorNorm <= 1.0) {
            const double rNext = lastStep ? rEnd : r + h;
            const bool crossesZero = y[0] > 0.0 && step.y1[0] <= 0.0;
            const bool turns = opt.stopAtTurn && y[1] < 0.0 && step.y1[1] >= 0.0;

            const bool zeroMatters = crossesZero && (opt.stopAtZero || !zeroRecorded);
            if (zeroMatters || turns) {
                const auto& seg = step.segment;
                constexpr double kNone = std::numeric_limits<double>::infinity();
                const double rZero = zeroMatters ? bracketRoot([&](double x) { return seg.eval(x)[0]; }, r, rNext) : kNone;
                const double rTurn = turns ? bracketRoot([&](double x) { return seg.eval(x)[1]; }, r, rNext) : kNone;
                double rStop = kNone;
                if (rZero <= rTurn) {
                    traj.events.push_back({EventKind::FirstZeroOfU, rZero});
                    zeroRecorded = true;
                    if (opt.stopAtZero) {
                        rStop = rZero;
                        traj.stop = StopReason::FirstZeroOfU;
                    }
                }
                if (rStop == kNone && rTurn != kNone) {
                    traj.events.push_back({EventKind::ZeroOfUPrime, rTurn});
                    rStop = rTurn;
                    traj.stop = StopReason::ZeroOfUPrime;
                }
                if (rStop != kNone) {
                    // Redo the step so the last node sits exactly on the event.
                    if (rStop > r) {
                        detail::StepOutcome exact = detail::dopri5Step(rhs, r, y, k1, rStop - r, scale);
                        traj.dense.append(exact.segment);
                        traj.errorEstimate += std::abs(exact.errorVector[0]);
                        pushNode(rStop, exact.y1);
                    }
                    return traj;
                }
            }

            traj.dense.append(step.segment);
            traj.errorEstimate += std::abs(step.errorVector[0]);
            r = rNext;
            y = step.y1;
            k1 = step.k7;
            pushNode(r, y);
            if (lastStep) {
                traj.stop = StopReason::ReachedEnd;
                return traj;
            }
            h *= detail::stepFactor(step.errorNorm);
        } else {
            h *= std::min(1.0, detail::stepFactor(step.errorNorm));
        }
        if (h < 1e-14 * std::max(1.0, r)) {
            std::ostringstream os;
            os << "step size underflow at r = " << r << " (u' = " << phiInverse(y[1] / radialWeight(r, n), p) << ")";
            throw SolverError(ErrorKind::StepUnderflow, os.str(), r);
        }
    }
}

}  // namespace

StartupValues seriesStartup(const ProblemSpec& spec, double lambda, double alpha, double epsilon) {
    if (!(epsilon > 0.0 && epsilon <= 1e-3))
        throw SolverError(ErrorKind::InvalidArgument, "startup offset must lie in (0, 1e-3]");
    if (!(alpha > 0.0)) throw SolverError(ErrorKind::InvalidArgument, "alpha must be positive");
    const double p = spec.exponents.p;
    const double nd = spec.exponents.n;
    const NonlinearityValues at0 = evalNonlinearity(spec, 0.0, alpha);
    if (at0.f == 0.0)
        throw SolverError(ErrorKind::DegenerateStart, "f(0, alpha) = 0: the trajectory cannot leave alpha", 0.0);

    const double s = at0.f > 0.0 ? 1.0 : -1.0;
    const double m = p / (p - 1.0);
    const double g = std::pow(lambda * std::abs(at0.f) / nd, 1.0 / (p - 1.0));
    const double c1 = at0.fr * nd / ((nd + 1.0) * at0.f * (p - 1.0));
    const double em = std::pow(epsilon, m);
    const double en = std::pow(epsilon, nd);

    StartupValues out;
    out.r = epsilon;
    out.u = alpha - s * g * (em / m + c1 * em * epsilon / (m + 1.0));
    out.v = -lambda * (at0.f * en / nd + at0.fr * en * epsilon / (nd + 1.0)) +
            lambda * at0.fu * s * g * en * em / (m * (nd + m));
    const double weight = radialWeight(epsilon, spec.exponents.n);
    out.uPrime = phiInverse(out.v / weight, p);
    out.w = 1.0 - g * at0.fu * em / (p * std::abs(at0.f));
    out.z = -lambda * at0.fu * en / nd;
    const double coef = weight * phiDerivative(out.uPrime, p);
    out.wPrime = out.z / coef;
    return out;
}

std::optional<double> RadialTrajectory::firstEvent(EventKind kind) const {
    for (const auto& e : events)
        if (e.kind == kind) return e.r;
    return std::nullopt;
}

std::array<double, 2> RadialTrajectory::stateAt(double x) const {
    if (!dense.empty() && x >= dense.begin() && x <= dense.end()) {
        const auto y = dense(x);
        return {y[0], phiInverse(y[1] / radialWeight(x, n), p)};
    }
    if (x <= r.front()) return {u.front(), uPrime.front()};
    if (x >= r.back()) return {u.back(), uPrime.back()};
    const auto it = std::upper_bound(r.begin(), r.end(), x);
    const std::size_t k = static_cast<std::size_t>(std::distance(r.begin(), it));
    const double t = (x - r[k - 1]) / (r[k] - r[k - 1]);
    return {u[k - 1] + t * (u[k] - u[k - 1]), uPrime[k - 1] + t * (uPrime[k] - uPrime[k - 1])};
}

RadialTrajectory integrateRadial(const ProblemSpec& spec, double lambda, double alpha, double rEnd,
                                 const IntegratorOptions& options) {
    if (!(alpha > 0.0)) throw SolverError(ErrorKind::InvalidArgument, "alpha must be positive");
    if (!(lambda > 0.0)) throw SolverError(ErrorKind::InvalidArgument, "lambda must be positive");
    if (!(rEnd > 0.0 && rEnd <= 1.0)) throw SolverError(ErrorKind::InvalidArgument, "rEnd must lie in (0, 1]");
    return integrateCore(spec, lambda, alpha, rEnd, options);
}

RadialTrajectory integrateToFirstZero(const ProblemSpec& spec, double lambda, double alpha, double maxRadius,
                                      IntegratorOptions options) {
    if (!(alpha > 0.0)) throw SolverError(ErrorKind::InvalidArgument, "alpha must be positive");
    options.stopAtZero = true;
    options.stopAtTurn = true;
    return integrateCore(spec, lambda, alpha, maxRadius, options);
}

double LinearizedTrajectory::maxAbsW() const {
    double m = 0.0;
    for (double x : w) m = std::max(m, std::abs(x));
    return std::max(m, std::abs(w0));
}

LinearizedTrajectory integrateLinearized(const ProblemSpec& spec, double lambda, const RadialTrajectory& parent,
                                         const IntegratorOptions& opt, double w0) {
    const double p = parent.p;
    const int n = parent.n;
    if (parent.dense.empty() || parent.r.size() < 2)
        throw SolverError(ErrorKind::Precondition, "linearization needs an integrated parent trajectory");
    for (std::size_t k = 0; k < parent.uPrime.size(); ++k) {
        if (!(parent.uPrime[k] < 0.0)) {
            std::ostringstream os;
            os << "u' vanishes at r = " << parent.r[k] << " (strict monotonicity violated)";
            throw SolverError(ErrorKind::SignConvention, os.str(), parent.r[k]);
        }
    }

    auto coefficient = [&](double r, double v) {
        const double weight = radialWeight(r, n);
        const double uPrime = phiInverse(v / weight, p);
        const double c = weight * (p == 2.0 ? 1.0 : (p - 1.0) * std::pow(std::abs(uPrime), p - 2.0));
        if (!(c > 0.0) || !std::isfinite(c))
            throw SolverError(ErrorKind::Pole, "phi'(u') degenerates inside the parent trajectory", r);
        return c;
    };
    auto rhs = [&](double r, const State& y) -> State {
        const auto uv = parent.dense(r);
        const double fu = evalExtended(spec, r, uv[0]).fu;
        return {y[1] / coefficient(r, uv[1]), -lambda * radialWeight(r, n) * fu * y[0]};
    };
    const double wScale = std::abs(w0);
    auto scale = [&](int, double a, double b) {
        return opt.absTol * wScale + opt.relTol * std::max(std::abs(a), std::abs(b));
    };

    LinearizedTrajectory lin;
    lin.w0 = w0;
    const double eps = parent.r.front();
    StartupValues start = seriesStartup(spec, lambda, parent.alpha, eps);
    State y{w0 * start.w, w0 * start.z};
    auto pushNode = [&](double r, const State& s) {
        lin.r.push_back(r);
        lin.w.push_back(s[0]);
        lin.z.push_back(s[1]);
        lin.wPrime.push_back(s[1] / coefficient(r, parent.v[lin.r.size() - 1]));
    };
    pushNode(eps, y);
    State k1 = rhs(eps, y);

    for (std::size_t k = 0; k + 1 < parent.r.size(); ++k) {
        double r = parent.r[k];
        const double target = parent.r[k + 1];
        double h = target - r;
        while (r < target) {
            const bool last = r + h >= target;
            if (last) h = target - r;
            detail::StepOutcome step = detail::dopri5Step(rhs, r, y, k1, h, scale);
            if (!std::isfinite(step.errorNorm)) step.errorNorm = 1e10;
            if (step.errorNorm <= 1.0) {
                lin.dense.append(step.segment);
                r = last ? target : r + h;
                y = step.y1;
                k1 = step.k7;
                if (!last) h = std::min(h * detail::stepFactor(step.errorNorm), target - r);
            } else {
                h *= std::min(1.0, detail::stepFactor(step.errorNorm));
                if (h < 1e-15 * std::max(1.0, r))
                    throw SolverError(ErrorKind::StepUnderflow, "linearized step size underflow", r);
            }
        }
        pushNode(target, y);
    }
    return lin;
}

std::vector<double> energyProfile(const ProblemSpec& spec, const RadialTrajectory& t) {
    std::vector<double> e(t.size());
    for (std::size_t k = 0; k < t.size(); ++k) {
        const double F = evalExtended(spec, t.r[k], t.u[k]).F;
        e[k] = (t.p - 1.0) / t.p * std::pow(std::abs(t.uPrime[k]), t.p) + t.lambda * F;
    }
    return e;
}

}  // namespace plap
