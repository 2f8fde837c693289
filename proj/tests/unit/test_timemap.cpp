#include "oracles.hpp"
#include "plap/error.hpp"
#include "plap/shoot.hpp"
#include "plap/timemap.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace plap;

namespace {

ErrorKind kindOf(auto&& fn) {
    try {
        fn();
    } catch (const SolverError& e) {
        return e.kind();
    }
    ADD_FAILURE() << "expected SolverError";
    return ErrorKind::Precondition;
}

const Autonomous1D kCubic(PowerSum::monomial(1.0, 3.0));
const Autonomous1D kDoubleWell(PowerSum({{-1.0, 1.0}, {1.0, 3.0}}));
const Autonomous1D kShifted(PowerSum({{-1.0, 0.0}, {1.0, 3.0}}));

double quartic(double s) { return std::pow(s, 4) / 4; }
double doubleWell(double s) { return std::pow(s, 4) / 4 - s * s / 2; }
double shifted(double s) { return std::pow(s, 4) / 4 - s; }

}  // namespace

TEST(TimeMap, MatchesDirectQuadrature) {
    struct Case {
        const Autonomous1D* f;
        double (*F)(double);
        double p;
        double alpha;
    };
    const Case cases[] = {{&kCubic, quartic, 2.0, 0.5},    {&kCubic, quartic, 3.0, 2.0},
                          {&kCubic, quartic, 1.4, 1.0},    {&kDoubleWell, doubleWell, 2.0, 1.5},
                          {&kDoubleWell, doubleWell, 2.0, 8.0}, {&kShifted, shifted, 2.0, 2.0},
                          {&kShifted, shifted, 4.0, 1.7}};
    for (const auto& c : cases) {
        const TimeMapResult tm = timeMapLambda(*c.f, c.p, c.alpha);
        const double ref = oracle::timeMap(c.F, c.p, c.alpha);
        EXPECT_NEAR(tm.lambda, ref, 1e-10 * ref) << "p = " << c.p << ", alpha = " << c.alpha;
        EXPECT_LT(tm.quadratureErrorEstimate, 1e-10);
        EXPECT_FALSE(tm.integrandSamples.empty());
        EXPECT_EQ(tm.alpha, c.alpha);
    }
}

TEST(TimeMap, PurePowerClosedForm) {
    // For f = u^q the map is a power law: lambda alpha^{q-p+1} is constant.
    const double p = 2.0, q = 3.0;
    const double k = timeMapLambda(kCubic, p, 1.0).lambda;
    for (double alpha : {0.1, 3.0, 40.0})
        EXPECT_NEAR(timeMapLambda(kCubic, p, alpha).lambda * std::pow(alpha, q - p + 1), k, 1e-11 * k);
}

TEST(TimeMap, FixedPanelsAgreeWithAdaptiveRule) {
    TimeMapOptions fixed;
    fixed.fixedPanels = 64;
    for (double alpha : {1.6, 3.0}) {
        const double a = timeMapLambda(kDoubleWell, 2.0, alpha).lambda;
        const double b = timeMapLambda(kDoubleWell, 2.0, alpha, fixed).lambda;
        EXPECT_NEAR(a, b, 1e-9 * a);
    }
}

TEST(TimeMap, AgreesWithShooting) {
    for (double alpha : {1.7, 2.0, 5.0}) {
        const double lambda = timeMapLambda(kShifted, 2.0, alpha).lambda;
        const ProblemSpec spec = makeProblem({2.0, 1}, kShifted);
        EXPECT_NEAR(solveAtLambda(spec, lambda).alpha, alpha, 1e-8 * alpha);
    }
}

TEST(TimeMap, CriticalPoints) {
    const auto c = criticalPoints(kShifted);
    EXPECT_NEAR(c.gamma, 1.0, 1e-12);
    EXPECT_NEAR(c.theta, std::cbrt(4.0), 1e-12);
    const auto d = criticalPoints(kCubic);
    EXPECT_EQ(d.gamma, 0.0);
    EXPECT_EQ(d.theta, 0.0);
}

TEST(TimeMap, InadmissibleNonlinearities) {
    EXPECT_EQ(kindOf([] { criticalPoints(Autonomous1D(PowerSum())); }), ErrorKind::Admissibility);
    EXPECT_EQ(kindOf([] { criticalPoints(Autonomous1D(PowerSum({{1.0, 1.0}, {-1.0, 3.0}}))); }),
              ErrorKind::Admissibility);
    // Positive near zero, dips negative, positive again.
    EXPECT_EQ(kindOf([] { criticalPoints(Autonomous1D(PowerSum::polynomial({0.0, 2.0, -3.0, 1.0}))); }),
              ErrorKind::Admissibility);
}

TEST(TimeMap, AmplitudeMustExceedTheta) {
    EXPECT_EQ(kindOf([] { timeMapLambda(kShifted, 2.0, 1.2); }), ErrorKind::Admissibility);
    EXPECT_EQ(kindOf([] { timeMapLambda(kShifted, 2.0, std::cbrt(4.0)); }), ErrorKind::Admissibility);
    EXPECT_EQ(kindOf([] { timeMapLambda(kCubic, 2.0, -1.0); }), ErrorKind::InvalidArgument);
    EXPECT_EQ(kindOf([] { timeMapLambda(kCubic, 1.0, 1.0); }), ErrorKind::InvalidArgument);
}

TEST(TimeMap, ApproachesExtinctionValueNearTheta) {
    const double theta = std::cbrt(4.0);
    const double lambda0 = oracle::extinctionLambda(shifted, 2.0, theta);
    double prev = 0.0;
    for (double d : {1e-2, 1e-4, 1e-6}) {
        const double lambda = timeMapLambda(kShifted, 2.0, theta * (1 + d)).lambda;
        EXPECT_GT(lambda, prev);
        EXPECT_LT(lambda, lambda0);
        prev = lambda;
    }
    EXPECT_NEAR(prev, lambda0, 1e-2 * lambda0);
}
