#include "plap/diagnostics.hpp"
#include "plap/error.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace plap;
using std::numbers::pi;

namespace {

ProblemSpec modelAB(std::vector<double> a, std::vector<double> b, double q, double p = 2.0, int n = 3,
                    bool requireSubcritical = true) {
    return makeProblem({p, n},
                       ModelAB{CoefficientFn(PowerSum::polynomial(std::span<const double>(a))),
                               CoefficientFn(PowerSum::polynomial(std::span<const double>(b))), q},
                       1.0, requireSubcritical);
}

Verdict verdictOf(const HypothesisReport& rep, std::string_view name) {
    const HypothesisCheck* c = rep.find(name);
    if (!c) {
        ADD_FAILURE() << "missing check " << name;
        return Verdict::Indeterminate;
    }
    return c->verdict;
}

// Independent polynomial helpers for the sampling oracle.
struct Poly {
    std::vector<double> c;
    double operator()(double x, int derivative = 0) const {
        double s = 0.0;
        for (std::size_t k = derivative; k < c.size(); ++k) {
            double coef = c[k];
            for (int j = 0; j < derivative; ++j) coef *= static_cast<double>(k - j);
            s += coef * std::pow(x, static_cast<double>(k - derivative));
        }
        return s;
    }
};

enum class Sampled { Positive, Negative, Unclear };

// Sign of min over (0,1) of g on a dense grid.
template <class G>
Sampled sampledMin(G&& g) {
    double lo = INFINITY;
    for (int i = 1; i < 4000; ++i) lo = std::min(lo, g(i / 4000.0));
    if (lo > 1e-9) return Sampled::Positive;
    if (lo < -1e-9) return Sampled::Negative;
    return Sampled::Unclear;
}

}  // namespace

TEST(Audit, ConstantCoefficientsPass) {
    const HypothesisReport rep = checkModelHypotheses(modelAB({1.0}, {1.0}, 3.0));
    EXPECT_TRUE(rep.allPass());
    for (const auto& c : rep.checks) EXPECT_EQ(c.verdict, Verdict::Pass) << c.name;
}

TEST(Audit, SupercriticalExponentReportsTheCriticalValue) {
    const HypothesisReport rep = checkModelHypotheses(modelAB({1.0}, {1.0}, 7.0, 2.0, 3, false));
    const HypothesisCheck* c = rep.find("subcritical growth");
    ASSERT_NE(c, nullptr);
    EXPECT_EQ(c->verdict, Verdict::Fail);
    ASSERT_TRUE(c->value);
    EXPECT_DOUBLE_EQ(*c->value, 5.0);
    EXPECT_NE(c->detail.find("critical exponent 5"), std::string::npos);
    EXPECT_FALSE(rep.allPass());
}

TEST(Audit, IncreasingBFails) {
    const HypothesisReport rep = checkModelHypotheses(modelAB({1.0}, {1.0, 1.0}, 3.0));
    const HypothesisCheck* c = rep.find("coefficient b' <= 0");
    ASSERT_NE(c, nullptr);
    EXPECT_EQ(c->verdict, Verdict::Fail);
    ASSERT_TRUE(c->witness);
    EXPECT_GT(*c->witness, 0.0);
    EXPECT_LT(*c->witness, 1.0);
}

TEST(Audit, NonMonotoneAFails) {
    EXPECT_EQ(verdictOf(checkModelHypotheses(modelAB({2.0, -1.0}, {1.0}, 3.0)), "coefficient a' >= 0"), Verdict::Fail);
    EXPECT_EQ(verdictOf(checkModelHypotheses(modelAB({1.0, 1.0}, {2.0, 0.0, -1.0}, 3.0)), "coefficient a' >= 0"),
              Verdict::Pass);
}

TEST(Audit, BPositiveDependsOnDimension) {
    // a = 1 + r, b = 2 - r^2, q = 3, p = 2: B = K b + (2/4) r b' with K = 2n/4 - (n - 2).
    EXPECT_EQ(verdictOf(checkModelHypotheses(modelAB({1.0, 1.0}, {2.0, 0.0, -1.0}, 3.0, 2.0, 2)), "B positive"),
              Verdict::Pass);
    EXPECT_EQ(verdictOf(checkModelHypotheses(modelAB({1.0, 1.0}, {2.0, 0.0, -1.0}, 3.0, 2.0, 3)), "B positive"),
              Verdict::Fail);
}

// Each radial coefficient verdict agrees with dense sampling of the same
// expression for random low-degree a and b.
TEST(Audit, RandomCoefficientsAgreeWithSampling) {
    std::mt19937 rng(20261017);
    std::uniform_real_distribution<double> coef(-1.0, 1.0);
    std::uniform_int_distribution<int> degree(0, 3);
    const double p = 2.0, q = 3.0;
    const int n = 2;
    int decided = 0;
    for (int trial = 0; trial < 300; ++trial) {
        Poly a{{1.0 + std::abs(coef(rng))}}, b{{1.0 + std::abs(coef(rng))}};
        for (int k = degree(rng); k > 0; --k) a.c.push_back(0.5 * coef(rng));
        for (int k = degree(rng); k > 0; --k) b.c.push_back(0.5 * coef(rng));
        const HypothesisReport rep = checkModelHypotheses(modelAB(a.c, b.c, q, p, n));
        const double K = n * p / (q + 1) - (n - p);
        struct Expect {
            const char* name;
            Sampled s;
            bool strict;
        };
        const Expect expectations[] = {
            {"coefficient a > 0", sampledMin([&](double r) { return a(r); }), true},
            {"coefficient b > 0", sampledMin([&](double r) { return b(r); }), true},
            {"coefficient a' >= 0", sampledMin([&](double r) { return a(r, 1); }), false},
            {"coefficient b' <= 0", sampledMin([&](double r) { return -b(r, 1); }), false},
            {"A positive", sampledMin([&](double r) { return p * a(r) + r * a(r, 1); }), true},
            {"A non-decreasing", sampledMin([&](double r) { return (p + 1) * a(r, 1) + r * a(r, 2); }), false},
            {"B positive", sampledMin([&](double r) { return K * b(r) + p / (q + 1) * r * b(r, 1); }), true},
            {"rb'/b non-increasing",
             sampledMin([&](double r) { return -(b(r) * (b(r, 1) + r * b(r, 2)) - r * b(r, 1) * b(r, 1)); }), false},
            {"rb' non-increasing", sampledMin([&](double r) { return -(b(r, 1) + r * b(r, 2)); }), false},
        };
        for (const auto& e : expectations) {
            if (e.s == Sampled::Unclear) continue;
            ++decided;
            const Verdict want = e.s == Sampled::Positive ? Verdict::Pass : Verdict::Fail;
            EXPECT_EQ(verdictOf(rep, e.name), want) << e.name << " trial " << trial;
        }
    }
    EXPECT_GT(decided, 1000);
}

TEST(Audit, CoefficientPowerFamily) {
    const auto member = [](double theta) {
        return makeProblem({2.0, 2}, PureB{CoefficientFn(PowerSum::polynomial({2.0, 0.0, -1.0})), 3.0, theta});
    };
    for (double theta : {0.0, 0.5, 1.0}) EXPECT_TRUE(checkModelHypotheses(member(theta)).allPass()) << theta;
    const ProblemSpec increasing = makeProblem({2.0, 2}, PureB{CoefficientFn(PowerSum::polynomial({1.0, 1.0})), 3.0, 0.5});
    EXPECT_EQ(verdictOf(checkModelHypotheses(increasing), "coefficient b' <= 0"), Verdict::Fail);
}

TEST(Audit, OneDimensionalNonlinearities) {
    const auto spec = [](PowerSum f) { return makeProblem({2.0, 1}, Autonomous1D(std::move(f))); };
    EXPECT_TRUE(checkModelHypotheses(spec(PowerSum({{-1.0, 1.0}, {1.0, 3.0}}))).allPass());
    EXPECT_TRUE(checkModelHypotheses(spec(PowerSum({{-1.0, 0.0}, {1.0, 3.0}}))).allPass());
    EXPECT_EQ(verdictOf(checkModelHypotheses(spec(PowerSum({{1.0, 1.0}, {-1.0, 3.0}}))), "sign pattern of f"),
              Verdict::Fail);
    // f = u: sublinear at infinity in the p = 2 sense.
    EXPECT_EQ(verdictOf(checkModelHypotheses(spec(PowerSum::monomial(1.0, 1.0))), "growth"), Verdict::Fail);
    // -f grows like u^{1/2} near 0, faster than u^{p-1}.
    EXPECT_EQ(verdictOf(checkModelHypotheses(spec(PowerSum({{-1.0, 0.5}, {1.0, 3.0}}))), "growth of -f near 0"),
              Verdict::Fail);
}

TEST(SolutionChecks, QualitativePropertiesHold) {
    for (int n : {1, 2, 3}) {
        const ProblemSpec spec = makeProblem({2.0, n}, Autonomous1D(PowerSum({{-1.0, 1.0}, {1.0, 3.0}})));
        const RadialSolution sol = solveAtLambda(spec, 3.0);
        const HypothesisReport rep = qualitativeChecks(sol);
        for (const auto& c : rep.checks) EXPECT_NE(c.verdict, Verdict::Fail) << c.name << " n = " << n;
        EXPECT_EQ(verdictOf(rep, "Hopf u'(1) < 0"), Verdict::Pass);
    }
}

TEST(SolutionChecks, RadialModelPassesAPosterioriConditions) {
    const ProblemSpec spec = modelAB({1.0, 1.0}, {2.0, 0.0, -1.0}, 3.0, 2.0, 2);
    const RadialSolution sol = solveAtLambda(spec, 10.0);
    const HypothesisReport rep = solutionHypotheses(sol);
    for (const auto& c : rep.checks) EXPECT_NE(c.verdict, Verdict::Fail) << c.name << ": " << c.detail;
    EXPECT_EQ(alphaMonotonicityCheck(sol).verdict, Verdict::Pass);
    const double r2 = signChangeRadius(sol);
    EXPECT_GT(r2, 0.0);
    EXPECT_LT(r2, 1.0);
}

TEST(SolutionChecks, PurePowerHasConstantAlphaFunction) {
    // (p f) / (u f_u - (p-1) f) = p / (q - p + 1) for f = u^q.
    const RadialSolution sol = solveAtLambda(makeProblem({2.0, 3}, PureB{CoefficientFn(), 3.0, 1.0}), 1.0);
    const HypothesisCheck c = alphaMonotonicityCheck(sol);
    EXPECT_EQ(c.verdict, Verdict::Pass);
    ASSERT_TRUE(c.value);
    EXPECT_NEAR(*c.value, 1.0, 1e-12);
}

TEST(Identities, ResidualMatrix) {
    struct Case {
        double p;
        int n;
        double lambda;
    };
    for (const Case c : {Case{2.0, 3, 2.0}, Case{3.0, 2, 5.0}, Case{2.5, 3, 3.0}, Case{2.0, 1, 4.0}}) {
        const ProblemSpec spec = makeProblem({c.p, c.n}, Autonomous1D(PowerSum({{-1.0, 1.0}, {1.0, 3.0}})));
        const RadialSolution sol = solveAtLambda(spec, c.lambda);
        ASSERT_TRUE(sol.linearized);
        const IdentityProfiles prof = identityProfiles(sol, *sol.linearized);
        EXPECT_LT(prof.xiResidual.relative(), 1e-6) << c.p << " " << c.n;
        EXPECT_LT(prof.tResidual.relative(), 1e-6) << c.p << " " << c.n;
        EXPECT_LT(prof.pResidual.relative(), 1e-6) << c.p << " " << c.n;
        EXPECT_NEAR(prof.boundaryValue, (c.p - 1) * std::pow(std::abs(sol.uPrimeAtOne), c.p), 1e-12);
        EXPECT_EQ(prof.r.size(), prof.I.size());
    }
}

TEST(Identities, WronskianOfTheLinearControl) {
    // For f = u, w = u / alpha and u'^2 + lambda u^2 = lambda alpha^2, so the
    // Wronskian is -lambda alpha rather than zero.
    const double lambda = pi * pi / 4, alpha = 0.7;
    const RadialSolution sol = assembleSolution(makeProblem({2.0, 1}, LinearTest{}), lambda, alpha);
    const OneDimIdentities one = oneDimIdentities(sol, *sol.linearized);
    for (double w : one.wronskian) ASSERT_NEAR(w, -lambda * alpha, 1e-8);
    EXPECT_EQ(verdictOf(one.checks, "Wronskian constant"), Verdict::Pass);
}

TEST(Identities, OneDimensionalChecks) {
    const ProblemSpec spec = makeProblem({2.0, 1}, Autonomous1D(PowerSum({{-1.0, 0.0}, {1.0, 3.0}})));
    const RadialSolution sol = solveAtLambda(spec, 2.0);
    const OneDimIdentities one = oneDimIdentities(sol, *sol.linearized);
    EXPECT_LT(one.tResidual.relative(), 1e-6);
    EXPECT_LT(one.energyDeviation, 1e-8);
    ASSERT_TRUE(one.x0);
    EXPECT_NEAR(sol.trajectory.stateAt(*one.x0)[0], 1.0, 1e-8);
    for (const auto& c : one.checks.checks) EXPECT_NE(c.verdict, Verdict::Fail) << c.name << ": " << c.detail;
}

TEST(Identities, OneDimensionalNeedsAutonomousSlab) {
    const RadialSolution sol = solveAtLambda(makeProblem({2.0, 3}, PureB{CoefficientFn(), 3.0, 1.0}), 1.0);
    EXPECT_THROW(oneDimIdentities(sol, *sol.linearized), SolverError);
}
