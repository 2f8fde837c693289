#include "oracles.hpp"
#include "plap/error.hpp"
#include "plap/shoot.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace plap;
using std::numbers::pi;

namespace {

ProblemSpec autonomous(double p, int n, PowerSum f) { return makeProblem({p, n}, Autonomous1D(std::move(f))); }

PowerSum cubic() { return PowerSum::monomial(1.0, 3.0); }
PowerSum cubicMinusLinear() { return PowerSum({{-1.0, 1.0}, {1.0, 3.0}}); }

ErrorKind kindOf(auto&& fn) {
    try {
        fn();
    } catch (const SolverError& e) {
        return e.kind();
    }
    ADD_FAILURE() << "expected SolverError";
    return ErrorKind::Precondition;
}

}  // namespace

TEST(Shoot, OneDimensionalAmplitudeMatchesTimeMap) {
    struct Case {
        double p;
        PowerSum f;
        double (*F)(double);
        double alpha;
    };
    auto quartic = [](double s) { return std::pow(s, 4) / 4; };
    auto doubleWell = [](double s) { return std::pow(s, 4) / 4 - s * s / 2; };
    const Case cases[] = {{2.0, cubic(), quartic, 1.3},
                          {3.0, cubic(), quartic, 0.8},
                          {1.5, cubic(), quartic, 2.0},
                          {2.0, cubicMinusLinear(), doubleWell, 2.5}};
    for (const auto& c : cases) {
        const auto F = c.F;
        const double lambda = oracle::timeMap(F, c.p, c.alpha);
        const RadialSolution sol = solveAtLambda(autonomous(c.p, 1, c.f), lambda);
        EXPECT_NEAR(sol.alpha, c.alpha, 1e-8 * c.alpha) << "p = " << c.p;
        EXPECT_LT(std::abs(sol.trajectory.uEnd()), 1e-9);
        EXPECT_LT(sol.uPrimeAtOne, 0.0);
        // Energy: (p-1)/p |u'(1)|^p = lambda F(alpha).
        EXPECT_NEAR((c.p - 1) / c.p * std::pow(-sol.uPrimeAtOne, c.p), lambda * F(c.alpha),
                    1e-7 * lambda * F(c.alpha));
    }
}

TEST(Shoot, PurePowerScalingLaw) {
    // u = c v maps lambda to lambda c^{p-1-q}, so lambda alpha^{q-p+1} is constant.
    for (auto [p, q] : {std::pair{2.0, 3.0}, std::pair{3.0, 4.0}, std::pair{1.8, 2.5}}) {
        const ProblemSpec spec = makeProblem({p, 3}, PureB{CoefficientFn(), q, 1.0});
        std::vector<double> invariants;
        for (double lambda : {0.5, 2.0, 8.0}) {
            const RadialSolution sol = solveAtLambda(spec, lambda);
            invariants.push_back(lambda * std::pow(sol.alpha, q - p + 1));
        }
        for (double k : invariants) EXPECT_NEAR(k, invariants.front(), 1e-8 * invariants.front()) << p << " " << q;
    }
}

TEST(Shoot, BoundarySlopeAgreesWithAmplitude) {
    const ProblemSpec spec = autonomous(2.0, 1, cubicMinusLinear());
    ShootOptions amp, slope;
    amp.method = ShootMethod::Amplitude;
    slope.method = ShootMethod::BoundarySlope;
    for (double lambda : {0.5, 3.0, 20.0}) {
        const RadialSolution a = solveAtLambda(spec, lambda, amp);
        const RadialSolution b = solveAtLambda(spec, lambda, slope);
        EXPECT_EQ(b.method, ShootMethod::BoundarySlope);
        EXPECT_NEAR(a.alpha, b.alpha, 1e-9 * a.alpha) << lambda;
        EXPECT_NEAR(a.uPrimeAtOne, b.uPrimeAtOne, 1e-7 * std::abs(a.uPrimeAtOne)) << lambda;
    }
}

TEST(Shoot, BoundarySlopeNeedsOneDimensionalAutonomousProblem) {
    EXPECT_FALSE(boundarySlopeApplies(autonomous(2.0, 3, cubic())));
    EXPECT_TRUE(boundarySlopeApplies(autonomous(2.0, 1, cubic())));
    EXPECT_EQ(kindOf([] { solveByBoundarySlope(autonomous(2.0, 3, cubic()), 1.0); }), ErrorKind::Precondition);
}

TEST(Shoot, ScalingSolverIsConsistent) {
    // Radial damping traps low amplitudes in the well around u = 1, so the
    // higher dimensions start higher.
    for (auto [n, alpha] : {std::pair{1, 2.0}, std::pair{2, 4.0}, std::pair{3, 6.0}}) {
        const ProblemSpec spec = autonomous(2.0, n, cubicMinusLinear());
        const ScalingResult s = solveAutonomousByScaling(spec, alpha);
        EXPECT_NEAR(s.lambda, std::pow(s.radius, 2.0), 1e-14 * s.lambda);
        EXPECT_DOUBLE_EQ(s.solution.alpha, alpha) << n;
        EXPECT_LT(std::abs(s.solution.trajectory.uEnd()), 1e-9) << n;
    }
}

TEST(Shoot, ScalingSolverRejectsRadialCoefficients) {
    const ProblemSpec spec = makeProblem({2.0, 3}, PureB{CoefficientFn(PowerSum::polynomial({2.0, 0.0, -1.0})), 3.0, 1.0});
    EXPECT_EQ(kindOf([&] { solveAutonomousByScaling(spec, 1.0); }), ErrorKind::Precondition);
}

TEST(Shoot, MissDistanceChangesSignAcrossTheSolution) {
    const ProblemSpec spec = autonomous(2.0, 3, cubic());
    const RadialSolution sol = solveAtLambda(spec, 1.0);
    EXPECT_GT(missDistance(spec, 1.0, 0.9 * sol.alpha), 0.0);
    EXPECT_LT(missDistance(spec, 1.0, 1.1 * sol.alpha), 0.0);
    EXPECT_NEAR(missDistance(spec, 1.0, sol.alpha), 0.0, 1e-9);
}

TEST(Shoot, DefaultBracketStartsAboveTheta) {
    const auto [lo, hi] = defaultAlphaBracket(autonomous(2.0, 1, cubicMinusLinear()));
    EXPECT_NEAR(lo, std::sqrt(2.0) * 1.001, 1e-12);
    EXPECT_NEAR(hi, 50 * std::sqrt(2.0), 1e-12);
    const auto [lo2, hi2] = defaultAlphaBracket(autonomous(2.0, 1, cubic()));
    EXPECT_DOUBLE_EQ(lo2, 1e-3);
    EXPECT_DOUBLE_EQ(hi2, 50.0);
}

TEST(Shoot, BracketWithoutSignChangeFails) {
    const ProblemSpec spec = autonomous(2.0, 3, cubic());
    ShootOptions opts;
    opts.method = ShootMethod::Amplitude;
    EXPECT_EQ(kindOf([&] { solveAtLambda(spec, 1.0, {0.01, 0.02}, opts); }), ErrorKind::BracketFailure);
    EXPECT_EQ(kindOf([&] { solveAtLambda(spec, 1.0, {2.0, 1.0}, opts); }), ErrorKind::InvalidArgument);
}

TEST(Shoot, LinearControlIsDegenerateAtTheEigenvalue) {
    const ProblemSpec spec = makeProblem({2.0, 3}, LinearTest{});
    const RadialSolution sol = assembleSolution(spec, pi * pi, 0.7);
    EXPECT_LT(std::abs(sol.trajectory.uEnd()), 1e-9);
    ASSERT_TRUE(sol.linearized);
    EXPECT_TRUE(isDegenerate(sol).degenerate);
    // w = u / alpha for a linear equation.
    EXPECT_NEAR(sol.linearized->w[sol.linearized->w.size() / 2],
                sol.trajectory.stateAt(sol.linearized->r[sol.linearized->r.size() / 2])[0] / 0.7, 1e-8);
    // Away from the eigenvalue no amplitude works.
    ShootOptions opts;
    opts.method = ShootMethod::Amplitude;
    EXPECT_EQ(kindOf([&] { solveAtLambda(spec, 0.8 * pi * pi, opts); }), ErrorKind::BracketFailure);
}

TEST(Shoot, SuperlinearSolutionsAreNondegenerate) {
    for (int n : {1, 2, 3}) {
        const RadialSolution sol = solveAtLambda(autonomous(2.0, n, cubicMinusLinear()), 2.0);
        EXPECT_FALSE(isDegenerate(sol).degenerate) << n;
        EXPECT_EQ(isDegenerate(sol).margin, sol.degeneracyMargin);
        EXPECT_NEAR(sol.relativeMargin, sol.degeneracyMargin / sol.linearized->maxAbsW(), 1e-15);
    }
}

TEST(Shoot, SolutionProfileIsMonotone) {
    const ProblemSpec spec = makeProblem(
        {2.5, 3}, ModelAB{CoefficientFn(PowerSum::polynomial({1.0, 1.0})), CoefficientFn(PowerSum::polynomial({2.0, 0.0, -1.0})), 3.0});
    const RadialSolution sol = solveAtLambda(spec, 5.0);
    EXPECT_EQ(sol.trajectory.stop, StopReason::ReachedEnd);
    for (std::size_t i = 1; i < sol.trajectory.size(); ++i) ASSERT_LT(sol.trajectory.u[i], sol.trajectory.u[i - 1]);
    EXPECT_LT(std::abs(sol.trajectory.uEnd()), 1e-9);
}

TEST(Shoot, NoSolutionBeyondTheRadialExtinctionIsReported) {
    // In three dimensions -u + u^3 loses its solutions for large lambda: the
    // boundary miss jumps from a turning trajectory to one that hits zero
    // early, and the root finder lands on the jump instead of a root.
    const ProblemSpec spec = autonomous(2.0, 3, cubicMinusLinear());
    EXPECT_NO_THROW(solveAtLambda(spec, 10.0));
    EXPECT_EQ(kindOf([&] { solveAtLambda(spec, 1e4); }), ErrorKind::BoundaryMismatch);
}
