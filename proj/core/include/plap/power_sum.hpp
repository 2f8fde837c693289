#pragma once

#include <initializer_list>
#include <optional>
#include <span>
#include <vector>

namespace plap {

struct PowerTerm {
    double coefficient = 0.0;
    double exponent = 0.0;
};

/// Sign information for a function on an open interval, built from exact
/// root isolation rather than sampling.
struct SignSummary {
    bool anyPositive = false;
    bool anyNegative = false;
    /// First root strictly inside the interval, if any.
    std::optional<double> interiorRoot;
    std::optional<double> positiveWitness;
    std::optional<double> negativeWitness;

    [[nodiscard]] bool strictlyPositive() const { return !anyNegative && !interiorRoot && anyPositive; }
    [[nodiscard]] bool strictlyNegative() const { return !anyPositive && !interiorRoot && anyNegative; }
    [[nodiscard]] bool nonNegative() const { return !anyNegative; }
    [[nodiscard]] bool nonPositive() const { return !anyPositive; }
};

/// Finite sum of c_k x^{e_k} with real exponents. Integer exponents give the
/// ordinary polynomials used for coefficient functions; real exponents cover
/// the power-type nonlinearities. Terms are kept sorted by exponent with equal
/// exponents merged and zero coefficients dropped.
class PowerSum {
public:
    PowerSum() = default;
    PowerSum(std::initializer_list<PowerTerm> terms);
    explicit PowerSum(std::vector<PowerTerm> terms);

    /// c_0 + c_1 x + c_2 x^2 + ...
    static PowerSum polynomial(std::span<const double> ascending);
    static PowerSum polynomial(std::initializer_list<double> ascending);
    static PowerSum constant(double c);
    static PowerSum monomial(double coefficient, double exponent);

    /// Evaluate for x >= 0. Integer-exponent sums may also be evaluated at x < 0.
    double operator()(double x) const;
    /// Odd extension to x < 0: sum of c sign(x)|x|^e. Equal to operator() for x >= 0.
    double oddExtension(double x) const;
    /// Even extension to x < 0: sum of c |x|^e.
    double evenExtension(double x) const;
    /// Sum of |c| x^e; roundoff scale for values near zero.
    double magnitude(double x) const;

    PowerSum derivative() const;
    /// Termwise primitive vanishing at 0. Requires all exponents > -1.
    PowerSum antiderivative() const;
    /// Multiply by x^k.
    PowerSum timesPower(double k) const;

    PowerSum operator+(const PowerSum& other) const;
    PowerSum operator-(const PowerSum& other) const;
    PowerSum operator*(const PowerSum& other) const;
    PowerSum operator*(double scale) const;
    PowerSum operator-() const { return *this * -1.0; }

    [[nodiscard]] bool isZero() const { return terms_.empty(); }
    [[nodiscard]] bool isConstant() const;
    /// All exponents are non-negative integers.
    [[nodiscard]] bool isPolynomial() const;
    [[nodiscard]] double lowestExponent() const;
    [[nodiscard]] double highestExponent() const;
    [[nodiscard]] double lowestCoefficient() const;
    [[nodiscard]] double leadingCoefficient() const;
    /// Value at x = 0 (0 when every exponent is positive).
    [[nodiscard]] double valueAtZero() const;
    [[nodiscard]] const std::vector<PowerTerm>& terms() const { return terms_; }

    /// All real roots in [lo, hi] with 0 <= lo < hi, located to ~1e-14
    /// relative. Identically zero sums report no roots.
    [[nodiscard]] std::vector<double> rootsIn(double lo, double hi) const;
    /// Sign structure on the open interval (lo, hi).
    [[nodiscard]] SignSummary signOn(double lo, double hi) const;
    /// B such that the sum has the sign of its leading coefficient on (B, inf).
    [[nodiscard]] double positiveRootBound() const;

private:
    void normalize();
    std::vector<PowerTerm> terms_;
};

}  // namespace plap
