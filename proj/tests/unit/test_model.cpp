#include "plap/error.hpp"
#include "plap/model.hpp"

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

}  // namespace

TEST(Model, RejectsExponentsOutsideTheStandingAssumptions) {
    EXPECT_EQ(kindOf([] { makeProblem({0.9, 1}, Autonomous1D()); }), ErrorKind::InvalidArgument);
    EXPECT_EQ(kindOf([] { makeProblem({2.0, 0}, Autonomous1D()); }), ErrorKind::InvalidArgument);
    EXPECT_EQ(kindOf([] { makeProblem({2.0, 1}, Autonomous1D(), -1.0); }), ErrorKind::InvalidArgument);
    EXPECT_EQ(kindOf([] { makeProblem({2.0, 3}, PureB{CoefficientFn(), 0.5, 1.0}); }), ErrorKind::InvalidArgument);
}

TEST(Model, SupercriticalGrowthNeedsExplicitOptIn) {
    EXPECT_THROW(makeProblem({2.0, 3}, ModelAB{CoefficientFn(), CoefficientFn(), 7.0}), SolverError);
    EXPECT_NO_THROW(makeProblem({2.0, 3}, ModelAB{CoefficientFn(), CoefficientFn(), 7.0}, 1.0, false));
}

TEST(Model, CriticalExponent) {
    EXPECT_DOUBLE_EQ(criticalExponent(2.0, 3), 5.0);
    EXPECT_TRUE(std::isinf(criticalExponent(3.0, 3)));
    EXPECT_TRUE(std::isinf(criticalExponent(2.0, 1)));
    // (np - n + p) / (n - p) at p = 1.5, n = 3.
    EXPECT_DOUBLE_EQ(criticalExponent(1.5, 3), (4.5 - 3.0 + 1.5) / 1.5);
}

TEST(Model, CoefficientDegreeIsBounded) {
    EXPECT_THROW(makeProblem({2.0, 3}, PureB{CoefficientFn(PowerSum::monomial(1.0, 9.0)), 3.0, 1.0}), SolverError);
    EXPECT_THROW(makeProblem({2.0, 3}, PureB{CoefficientFn(PowerSum::monomial(1.0, 0.5)), 3.0, 1.0}), SolverError);
}

TEST(Model, EvaluationIsConsistentWithItsDerivatives) {
    const ProblemSpec spec = makeProblem(
        {3.0, 3}, ModelAB{CoefficientFn(PowerSum::polynomial({1.0, 1.0})), CoefficientFn(PowerSum::polynomial({2.0, 0.0, -1.0})), 4.0});
    const double h = 1e-6;
    for (double r : {0.2, 0.8}) {
        for (double u : {0.5, 1.7}) {
            const auto v = evalNonlinearity(spec, r, u);
            const double fu = (evalNonlinearity(spec, r, u + h).f - evalNonlinearity(spec, r, u - h).f) / (2 * h);
            const double fr = (evalNonlinearity(spec, r + h, u).f - evalNonlinearity(spec, r - h, u).f) / (2 * h);
            const double Fu = (evalNonlinearity(spec, r, u + h).F - evalNonlinearity(spec, r, u - h).F) / (2 * h);
            const double Fr = (evalNonlinearity(spec, r + h, u).F - evalNonlinearity(spec, r - h, u).F) / (2 * h);
            EXPECT_NEAR(v.fu, fu, 1e-7 * std::max(1.0, std::abs(fu)));
            EXPECT_NEAR(v.fr, fr, 1e-7 * std::max(1.0, std::abs(fr)));
            EXPECT_NEAR(v.f, Fu, 1e-7 * std::max(1.0, std::abs(Fu)));
            EXPECT_NEAR(v.Fr, Fr, 1e-7 * std::max(1.0, std::abs(Fr)));
        }
    }
}

TEST(Model, NegativeAmplitudeIsRejectedButExtendable) {
    const ProblemSpec spec = makeProblem({2.0, 1}, PureB{CoefficientFn(), 1.5, 1.0});
    EXPECT_THROW(evalNonlinearity(spec, 0.5, -0.1), SolverError);
    const auto v = evalExtended(spec, 0.5, -0.25);
    EXPECT_DOUBLE_EQ(v.f, -std::pow(0.25, 1.5));
}

TEST(Model, CriticalAmplitudesOfCubicFamilies) {
    // -u + u^3: gamma = 1, F = -u^2/2 + u^4/4 vanishes at sqrt 2.
    const auto c = criticalAmplitudes(PowerSum({{-1.0, 1.0}, {1.0, 3.0}}));
    EXPECT_NEAR(c.gamma, 1.0, 1e-12);
    EXPECT_NEAR(c.theta, std::sqrt(2.0), 1e-12);
    // u^3 - 1: gamma = 1, F = u^4/4 - u vanishes at 4^(1/3).
    const auto d = criticalAmplitudes(PowerSum({{-1.0, 0.0}, {1.0, 3.0}}));
    EXPECT_NEAR(d.gamma, 1.0, 1e-12);
    EXPECT_NEAR(d.theta, std::cbrt(4.0), 1e-12);
    // f >= 0: both zero.
    const auto e = criticalAmplitudes(PowerSum::monomial(1.0, 3.0));
    EXPECT_EQ(e.gamma, 0.0);
    EXPECT_EQ(e.theta, 0.0);
}

TEST(Model, ModelABClosedFormAmplitudes) {
    const double p = 2.0, q = 3.0;
    const ProblemSpec spec = makeProblem({p, 3}, ModelAB{CoefficientFn::constant(2.0), CoefficientFn::constant(1.0), q});
    const auto c = criticalAmplitudes(spec);
    EXPECT_NEAR(c.gamma, std::sqrt(2.0), 1e-14);
    const double F = -2.0 * std::pow(c.theta, p) / p + std::pow(c.theta, q + 1) / (q + 1);
    EXPECT_NEAR(F, 0.0, 1e-13);
}

TEST(Model, AutonomousProfiles) {
    const ProblemSpec pure = makeProblem({2.0, 3}, PureB{CoefficientFn::constant(4.0), 3.0, 0.5});
    ASSERT_TRUE(autonomousProfile(pure));
    EXPECT_DOUBLE_EQ((*autonomousProfile(pure))(1.0), 2.0);
    const ProblemSpec radial = makeProblem({2.0, 3}, PureB{CoefficientFn(PowerSum::polynomial({2.0, 0.0, -1.0})), 3.0, 1.0});
    EXPECT_FALSE(isAutonomous(radial));
    EXPECT_NE(describe(radial).find("u^3"), std::string::npos);
}
