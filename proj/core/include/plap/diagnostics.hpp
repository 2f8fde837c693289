#pragma once

#include "plap/shoot.hpp"

#include <optional>
#include <string>
#include <vector>

namespace plap {

enum class Verdict { Pass, Fail, Indeterminate, NotApplicable };
std::string_view toString(Verdict v) noexcept;

struct HypothesisCheck {
    std::string name;
    Verdict verdict = Verdict::Pass;
    /// Radius (or amplitude) where the check failed or was decided.
    std::optional<double> witness;
    std::optional<double> value;
    std::string detail;

    [[nodiscard]] bool pass() const { return verdict == Verdict::Pass; }
};

struct HypothesisReport {
    std::vector<HypothesisCheck> checks;

    void add(HypothesisCheck check);
    void append(const HypothesisReport& other);
    /// No check failed (indeterminate and not-applicable entries do not count).
    [[nodiscard]] bool allPass() const;
    [[nodiscard]] const HypothesisCheck* find(std::string_view name) const;
};

/// Largest deviation of an identity in integrated form,
/// |Phi(r) - Phi(r0) - int_{r0}^{r} rhs|, and the profile scale max |Phi|.
struct IdentityResidual {
    double absolute = 0.0;
    double scale = 0.0;
    [[nodiscard]] double relative() const { return scale > 0.0 ? absolute / scale : absolute; }
};

struct IdentityProfiles {
    std::vector<double> r;
    std::vector<double> xi;
    std::vector<double> T;
    std::vector<double> Q;
    std::vector<double> P;
    std::vector<double> I;
    /// (p f + r f_r) / (u f_u - (p-1) f); NaN where the denominator vanishes.
    std::vector<double> alphaFn;
    IdentityResidual xiResidual;
    IdentityResidual tResidual;
    IdentityResidual pResidual;
    /// Sign change radius of f(r, u(r)); 1 when f stays positive.
    double r2 = 1.0;
    /// (p-1)|u'(1)|^p, the boundary value of both Q and P.
    double boundaryValue = 0.0;
};

IdentityProfiles identityProfiles(const RadialSolution& solution, const LinearizedTrajectory& linearized);

/// Sign-change radius r2 of r -> f(r, u(r)) on the solution, refined on the
/// dense output. Returns 1 when f stays positive up to the boundary tail.
double signChangeRadius(const RadialSolution& solution);

/// Energy (p-1)/p |u'|^p + lambda F(r, u) along the solution nodes.
std::vector<double> energyAlong(const RadialSolution& solution);

/// Hopf sign, strict monotonicity, f(0, alpha) > 0, single sign change of
/// f(r, u(r)) and non-increasing energy.
HypothesisReport qualitativeChecks(const RadialSolution& solution);

/// Coefficient-level audit by exact polynomial sign determination. ModelAB
/// and PureB get the radial conditions; Autonomous1D the one-dimensional ones.
HypothesisReport checkModelHypotheses(const ProblemSpec& spec);

/// alpha(r) = (p f + r f_r) / (u f_u - (p-1) f) non-increasing along a computed solution, to 1e-8.
HypothesisCheck alphaMonotonicityCheck(const RadialSolution& solution);

/// A posteriori conditions along the solution: f(r,0) = 0 with f_r <= 0,
/// u f_u > (p-1) f, monotone alpha(r), u f > p F before r2, the sign
/// pattern of I with its case, and no zero of w past r2.
HypothesisReport solutionHypotheses(const RadialSolution& solution);

enum class IdentityCase { CaseI, CaseII, CaseIII, Indeterminate, None };
std::string_view toString(IdentityCase c) noexcept;

/// Case read from the sign pattern of I(r) on the grid.
IdentityCase classifyI(const IdentityProfiles& profiles, const RadialSolution& solution);

struct OneDimIdentities {
    /// -lambda f w - u' z, which must be constant along the solution.
    std::vector<double> wronskian;
    double wronskianDeviation = 0.0;
    double wronskianScale = 0.0;
    /// x [(p-1) phi(u') w' + lambda f w] - (p-1) phi(u') w
    std::vector<double> T;
    IdentityResidual tResidual;
    double energyDeviation = 0.0;
    std::optional<double> x0;
    double qAtX0 = 0.0;
    double combinationAtX0 = 0.0;
    double wPrimeAtX0 = 0.0;
    HypothesisReport checks;
};

OneDimIdentities oneDimIdentities(const RadialSolution& solution, const LinearizedTrajectory& linearized);

}  // namespace plap
