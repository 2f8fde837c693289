#include "plap/curve.hpp"

#include "plap/diagnostics.hpp"
#include "plap/error.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace plap {
namespace {

constexpr double kLambda0Slope = 1e-6;
constexpr double kInfiniteSlope = 1e-4;

bool oneDimAutonomous(const ProblemSpec& spec) { return spec.exponents.n == 1 && isAutonomous(spec); }

bool recoverable(const SolverError& e) {
    switch (e.kind()) {
        case ErrorKind::BracketFailure:
        case ErrorKind::BoundaryMismatch:
        case ErrorKind::StepUnderflow:
        case ErrorKind::NoZeroReached:
            return true;
        default:
            return false;
    }
}

CurvePoint makePoint(double parameter, RadialSolution sol) {
    CurvePoint pt;
    pt.parameter = parameter;
    pt.alpha = sol.alpha;
    pt.uPrimeAtOne = sol.uPrimeAtOne;
    pt.degeneracyMargin = sol.degeneracyMargin;
    pt.relativeMargin = sol.relativeMargin;
    const double p = sol.spec.exponents.p;
    pt.amplitudeEnergy = (p - 1.0) * std::pow(std::abs(sol.uPrimeAtOne), p) / (p * sol.lambda);
    pt.solution = std::make_shared<const RadialSolution>(std::move(sol));
    return pt;
}

// Quantity that must move monotonically along an admissible curve.
double monotoneKey(const SolutionCurve& curve, const CurvePoint& pt) {
    return oneDimAutonomous(curve.spec) ? pt.amplitudeEnergy : pt.alpha;
}

// lambda(alpha) = R^p is decreasing in alpha for the admissible autonomous
// problems, so a bracket follows from expanding the amplitude until the
// rescaled lambda drops below the target.
std::pair<double, double> scalingBracket(const ProblemSpec& spec, double lambda, const ShootOptions& options) {
    ShootOptions light = options;
    light.attachLinearized = false;
    auto [lo, hi] = defaultAlphaBracket(spec);
    auto lambdaOf = [&](double alpha) { return solveAutonomousByScaling(spec, alpha, light).lambda; };
    if (lambdaOf(lo) < lambda) {
        std::ostringstream os;
        os << "no amplitude in the default bracket reaches lambda = " << lambda;
        throw SolverError(ErrorKind::BracketFailure, os.str(), lambda);
    }
    for (int i = 0; i < 12 && lambdaOf(hi) > lambda; ++i) {
        lo = hi;
        hi *= 10.0;
    }
    return {lo, hi};
}

RadialSolution coldSolve(const ProblemSpec& spec, double lambda, const ShootOptions& options) {
    try {
        return solveAtLambda(spec, lambda, options);
    } catch (const SolverError& e) {
        if (e.kind() != ErrorKind::BracketFailure) throw;
    }
    if (isAutonomous(spec)) return solveAtLambda(spec, lambda, scalingBracket(spec, lambda, options), options);
    auto [lo, hi] = defaultAlphaBracket(spec);
    for (int i = 0; i < 6; ++i) {
        lo = hi;
        hi *= 10.0;
        try {
            return solveAtLambda(spec, lambda, {lo, hi}, options);
        } catch (const SolverError& e) {
            if (e.kind() != ErrorKind::BracketFailure) throw;
        }
    }
    std::ostringstream os;
    os << "no sign change of the miss distance up to alpha = " << hi;
    throw SolverError(ErrorKind::BracketFailure, os.str(), lambda);
}

// Bracket centred on the predicted amplitude, widened twice before giving up.
RadialSolution warmSolve(const ProblemSpec& spec, double lambda, double previous, double predicted,
                         const ShootOptions& options) {
    double delta = std::max(2.0 * std::abs(predicted - previous), 1e-3 * previous);
    for (int i = 0; i < 3; ++i) {
        const double lo = std::max(predicted - delta, 0.5 * previous);
        try {
            return solveAtLambda(spec, lambda, {lo, predicted + delta}, options);
        } catch (const SolverError& e) {
            if (!recoverable(e)) throw;
        }
        delta *= 10.0;
    }
    return coldSolve(spec, lambda, options);
}

std::optional<RadialSolution> trySolve(const ProblemSpec& spec, double lambda, const ShootOptions& options) {
    try {
        return coldSolve(spec, lambda, options);
    } catch (const SolverError& e) {
        if (!recoverable(e)) throw;
    }
    return std::nullopt;
}

// Secant prediction in (log lambda, log alpha).
double predictAlpha(const std::vector<CurvePoint>& pts, double next) {
    const auto& b = pts.back();
    if (pts.size() < 2) return b.alpha;
    const auto& a = pts[pts.size() - 2];
    if (a.solution->method != b.solution->method) return b.alpha;
    const double dl = std::log(b.parameter / a.parameter);
    const double slope = std::log(b.alpha / a.alpha) / dl;
    return b.alpha * std::exp(slope * std::log(next / b.parameter));
}

void checkMargin(const RadialSolution& sol, double theta, double tolerance) {
    if (std::isfinite(sol.relativeMargin) && std::abs(sol.relativeMargin) >= tolerance) return;
    std::ostringstream os;
    os << "degeneracy margin collapsed at theta = " << theta << ": w(1)/max|w| = " << sol.relativeMargin;
    throw SolverError(ErrorKind::MarginCollapse, os.str(), theta);
}

}  // namespace

std::string_view toString(ParameterKind kind) noexcept {
    return kind == ParameterKind::Lambda ? "lambda" : "theta";
}

Lambda0Result detectLambda0(const ProblemSpec& spec, std::pair<double, double> lambdaBracket,
                            const ShootOptions& options) {
    auto [lo, hi] = lambdaBracket;
    if (!(lo > 0.0) || !(hi > lo))
        throw SolverError(ErrorKind::InvalidArgument, "lambda bracket must satisfy 0 < lo < hi");
    Lambda0Result out;
    if (auto top = trySolve(spec, hi, options)) {
        const double slope = std::abs(top->uPrimeAtOne);
        out.uPrimeAtOne = top->uPrimeAtOne;
        if (slope < kLambda0Slope) {
            out.finite = true;
            out.lambda0 = hi;
            out.solution = std::make_shared<const RadialSolution>(std::move(*top));
            return out;
        }
        if (slope <= kInfiniteSlope) out.note = "|u'(1)| at the bracket top is between the thresholds";
        out.solution = std::make_shared<const RadialSolution>(std::move(*top));
        return out;
    }
    auto low = trySolve(spec, lo, options);
    if (!low) {
        std::ostringstream os;
        os << "no solution at the bracket bottom lambda = " << lo;
        throw SolverError(ErrorKind::Precondition, os.str(), lo);
    }
    double slope = std::abs(low->uPrimeAtOne);
    for (int i = 0; i < 200 && slope >= kLambda0Slope && hi - lo > 1e-15 * hi; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (auto s = trySolve(spec, mid, options)) {
            const double next = std::abs(s->uPrimeAtOne);
            if (next > slope * (1.0 + 1e-6) + 1e-12) out.monotone = false;
            slope = next;
            lo = mid;
            low = std::move(s);
        } else {
            hi = mid;
        }
    }
    out.finite = true;
    out.lambda0 = lo;
    out.uPrimeAtOne = low->uPrimeAtOne;
    if (!out.monotone) out.note = "|u'(1)| is not monotone along the bisection";
    if (slope >= kLambda0Slope) {
        std::ostringstream os;
        os << "solvability edge at lambda = " << lo << " with |u'(1)| = " << slope;
        out.note += (out.note.empty() ? "" : "; ") + os.str();
    }
    out.solution = std::make_shared<const RadialSolution>(std::move(*low));
    return out;
}

SolutionCurve traceLambdaCurve(const ProblemSpec& spec, std::pair<double, double> lambdaRange, int steps,
                               const CurveOptions& options) {
    const auto [lo, hi] = lambdaRange;
    if (!(lo > 0.0) || !(hi > lo)) throw SolverError(ErrorKind::InvalidArgument, "lambda range must satisfy 0 < lo < hi");
    if (steps < 1) throw SolverError(ErrorKind::InvalidArgument, "steps must be at least 1");

    const bool geometric = hi / lo >= 10.0;
    std::vector<double> grid(static_cast<std::size_t>(steps) + 1);
    for (int k = 0; k <= steps; ++k) {
        const double t = static_cast<double>(k) / steps;
        grid[k] = geometric ? lo * std::pow(hi / lo, t) : lo + (hi - lo) * t;
    }
    grid.back() = hi;

    SolutionCurve curve;
    curve.spec = spec;
    curve.parameterKind = ParameterKind::Lambda;
    const ShootOptions& shoot = options.shoot;
    try {
        curve.points.push_back(makePoint(lo, coldSolve(spec, lo, shoot)));
    } catch (const SolverError& e) {
        throw SolverError(e.kind(), std::string("seed failure: ") + e.what(), lo);
    }

    for (int k = 1; k <= steps; ++k) {
        const double target = grid[k];
        const CurvePoint& last = curve.points.back();
        try {
            RadialSolution sol = warmSolve(spec, target, last.alpha, predictAlpha(curve.points, target), shoot);
            curve.points.push_back(makePoint(target, std::move(sol)));
            continue;
        } catch (const SolverError& e) {
            if (!recoverable(e)) throw;
        }
        const Lambda0Result edge = detectLambda0(spec, {last.parameter, target}, shoot);
        if (edge.finite && std::abs(edge.uPrimeAtOne) < kLambda0Slope) {
            if (edge.lambda0 > last.parameter) curve.points.push_back(makePoint(edge.lambda0, *edge.solution));
            curve.stopReason = "lambda0";
            break;
        }
        std::ostringstream os;
        os << "continuation stalls below lambda = " << target << ": " << edge.note;
        throw SolverError(ErrorKind::StepCollapse, os.str(), edge.lambda0);
    }
    if (curve.points.size() >= 3) curve.shape = classifyCurve(curve);
    return curve;
}

ProblemSpec homotopyMember(const ProblemSpec& start, HomotopyKind kind, double theta) {
    if (!(theta >= 0.0 && theta <= 1.0)) throw SolverError(ErrorKind::InvalidArgument, "theta must lie in [0, 1]");
    ProblemSpec out = start;
    if (kind == HomotopyKind::CoefficientPower) {
        const auto* m = std::get_if<PureB>(&start.nonlinearity);
        if (!m) throw SolverError(ErrorKind::InvalidArgument, "coefficient-power homotopy needs a pure_b problem");
        out.nonlinearity = PureB{m->b, m->q, theta * m->bPower};
        return out;
    }
    const auto* m = std::get_if<ModelAB>(&start.nonlinearity);
    if (!m) throw SolverError(ErrorKind::InvalidArgument, "linear-term homotopy needs a model_ab problem");
    if (theta == 0.0) out.nonlinearity = PureB{m->b, m->q, 1.0};
    else out.nonlinearity = ModelAB{CoefficientFn(m->a.poly() * theta), m->b, m->q};
    return out;
}

SolutionCurve traceHomotopy(const ProblemSpec& start, HomotopyKind kind, int steps, const HomotopyOptions& options) {
    if (steps < 1) throw SolverError(ErrorKind::InvalidArgument, "steps must be at least 1");
    if (options.auditPoints < 2) throw SolverError(ErrorKind::InvalidArgument, "audit needs at least two points");

    for (int k = 0; k < options.auditPoints; ++k) {
        const double theta = static_cast<double>(k) / (options.auditPoints - 1);
        const HypothesisReport report = checkModelHypotheses(homotopyMember(start, kind, theta));
        for (const auto& c : report.checks) {
            if (c.verdict != Verdict::Fail) continue;
            std::ostringstream os;
            os << "condition " << c.name << " fails at theta = " << theta;
            if (!c.detail.empty()) os << " (" << c.detail << ")";
            throw SolverError(ErrorKind::HypothesisFailure, os.str(), theta);
        }
    }

    const double lambda = start.lambda;
    const double from = options.reverse ? 1.0 : 0.0;
    const double to = 1.0 - from;
    const ShootOptions& shoot = options.shoot;

    SolutionCurve curve;
    curve.spec = start;
    curve.parameterKind = ParameterKind::Theta;

    auto solveMember = [&](double theta, std::optional<double> guess) {
        const ProblemSpec member = homotopyMember(start, kind, theta);
        RadialSolution sol = guess ? warmSolve(member, lambda, *guess, *guess, shoot) : coldSolve(member, lambda, shoot);
        checkMargin(sol, theta, options.marginTolerance);
        return sol;
    };

    curve.points.push_back(makePoint(from, solveMember(from, options.seedAlpha)));
    for (int k = 1; k <= steps; ++k) {
        const double target = from + (to - from) * static_cast<double>(k) / steps;
        double trial = target;
        for (;;) {
            const CurvePoint& last = curve.points.back();
            try {
                curve.points.push_back(makePoint(trial, solveMember(trial, last.alpha)));
                if (trial == target) break;
                trial = target;
                continue;
            } catch (const SolverError& e) {
                if (!recoverable(e)) throw;
            }
            trial = 0.5 * (last.parameter + trial);
            if (std::abs(trial - last.parameter) < options.minStep) {
                std::ostringstream os;
                os << "theta step collapsed below " << options.minStep << " at theta = " << last.parameter;
                throw SolverError(ErrorKind::StepCollapse, os.str(), last.parameter);
            }
        }
    }
    if (curve.points.size() >= 3) curve.shape = classifyCurve(curve);
    return curve;
}

CurveShape classifyCurve(const SolutionCurve& curve) {
    const auto& pts = curve.points;
    if (pts.size() < 3) throw SolverError(ErrorKind::Precondition, "curve classification needs at least three points");

    CurveShape shape;
    const bool ascending = pts.back().parameter > pts.front().parameter;
    const CurvePoint& lowEnd = ascending ? pts.front() : pts.back();
    const CurvePoint& highEnd = ascending ? pts.back() : pts.front();
    shape.alphaLimitLow = lowEnd.alpha;
    shape.alphaLimitHigh = highEnd.alpha;

    // Sign of d(key)/d(parameter) per interval; a zero difference breaks
    // strict monotonicity without counting as a fold.
    int previousSign = 0;
    for (std::size_t i = 1; i < pts.size(); ++i) {
        const double dk = monotoneKey(curve, pts[i]) - monotoneKey(curve, pts[i - 1]);
        const double dp = pts[i].parameter - pts[i - 1].parameter;
        const int sign = (dk > 0.0) - (dk < 0.0);
        const int directed = dp > 0.0 ? sign : -sign;
        if (directed == 0) {
            shape.alphaMonotone = false;
            continue;
        }
        if (previousSign != 0 && directed != previousSign) {
            ++shape.foldsDetected;
            shape.alphaMonotone = false;
        }
        previousSign = directed;
    }

    std::vector<double> mags;
    mags.reserve(pts.size());
    const double firstSign = std::copysign(1.0, pts.front().relativeMargin);
    for (const auto& pt : pts) {
        if (!std::isfinite(pt.relativeMargin) || std::copysign(1.0, pt.relativeMargin) != firstSign ||
            pt.relativeMargin == 0.0)
            shape.marginSignConstant = false;
        mags.push_back(std::abs(pt.relativeMargin));
    }
    std::vector<double> sorted = mags;
    std::nth_element(sorted.begin(), sorted.begin() + sorted.size() / 2, sorted.end());
    const double median = sorted[sorted.size() / 2];
    const double floor = *std::min_element(mags.begin(), mags.end());
    shape.marginFloorRatio = median > 0.0 ? floor / median : 0.0;

    if (curve.parameterKind == ParameterKind::Lambda && curve.stopReason == "lambda0") {
        shape.lambda0Finite = true;
        shape.lambda0 = pts.back().parameter;
    }

    if (curve.parameterKind == ParameterKind::Lambda && oneDimAutonomous(curve.spec)) {
        const double f0 = autonomousProfile(curve.spec)->valueAtZero();
        // Both one-dimensional templates have alpha decreasing in lambda.
        const bool decreasing = shape.alphaMonotone && previousSign < 0;
        if (shape.foldsDetected == 0 && decreasing) {
            if (f0 < 0.0 && shape.lambda0Finite) shape.templateMatch = "f(0)<0";
            else if (f0 == 0.0 && !shape.lambda0Finite) shape.templateMatch = "f(0)=0";
        }
    }
    return shape;
}

}  // namespace plap
