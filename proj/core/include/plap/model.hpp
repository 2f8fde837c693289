#pragma once

#include "plap/power_sum.hpp"

#include <optional>
#include <string>
#include <variant>

namespace plap {

struct Exponents {
    double p = 2.0;  ///< p-Laplace exponent, p > 1
    int n = 1;       ///< space dimension, n >= 1
};

/// Radial coefficient a(r) or b(r): a polynomial in r of degree <= 8 with
/// its exact derivative cached next to it.
class CoefficientFn {
public:
    CoefficientFn();  // constant 1
    explicit CoefficientFn(PowerSum poly);
    static CoefficientFn constant(double c) { return CoefficientFn(PowerSum::constant(c)); }

    double value(double r) const { return poly_(r); }
    double slope(double r) const { return slope_(r); }
    const PowerSum& poly() const { return poly_; }
    const PowerSum& derivativePoly() const { return slope_; }
    bool isConstant() const { return poly_.isConstant(); }

private:
    PowerSum poly_;
    PowerSum slope_;
};

/// f = -a(r) u^{p-1} + b(r) u^q
struct ModelAB {
    CoefficientFn a;
    CoefficientFn b;
    double q = 3.0;
};

/// f = b(r)^{bPower} u^q. bPower = 1 is the plain family; other values
/// parametrize the coefficient homotopy b^theta.
struct PureB {
    CoefficientFn b;
    double q = 3.0;
    double bPower = 1.0;
};

/// Autonomous f(u), a power sum in u (ordinary polynomial in the usual case).
class Autonomous1D {
public:
    Autonomous1D();
    explicit Autonomous1D(PowerSum f);

    const PowerSum& f() const { return f_; }
    const PowerSum& fPrime() const { return fPrime_; }
    const PowerSum& primitive() const { return primitive_; }

private:
    PowerSum f_;
    PowerSum fPrime_;
    PowerSum primitive_;
};

/// f = u. Only used as an analytic oracle; it violates the superlinearity condition.
struct LinearTest {};

using Nonlinearity = std::variant<ModelAB, PureB, Autonomous1D, LinearTest>;

struct ProblemSpec {
    Exponents exponents;
    Nonlinearity nonlinearity;
    double lambda = 1.0;
};

/// f, f_u, f_r, F = int_0^u f, F_r at one point (lambda not applied).
struct NonlinearityValues {
    double f = 0.0;
    double fu = 0.0;
    double fr = 0.0;
    double F = 0.0;
    double Fr = 0.0;
};

/// Validates the standing assumptions and returns the spec. Supercritical q
/// (n > p) is rejected unless requireSubcritical is false, which the
/// hypothesis auditor uses so it can report the violation instead.
ProblemSpec makeProblem(Exponents exponents, Nonlinearity nonlinearity, double lambda = 1.0,
                        bool requireSubcritical = true);
void validate(const ProblemSpec& spec, bool requireSubcritical = true);

/// (np - n + p)/(n - p) for n > p, +infinity otherwise.
double criticalExponent(double p, int n);

/// Growth exponent q of ModelAB/PureB families.
std::optional<double> growthExponent(const ProblemSpec& spec);

/// Exact values for r in [0,1], u >= 0. Throws InvalidArgument for u < 0.
NonlinearityValues evalNonlinearity(const ProblemSpec& spec, double r, double u);

/// Same as evalNonlinearity but defined for u < 0 through the odd extension of
/// f (natural extension for integer polynomials). The integrator needs this
/// for trial stages that overshoot the boundary zero.
NonlinearityValues evalExtended(const ProblemSpec& spec, double r, double u);

/// f(u) as a power sum when the problem is autonomous (no r dependence).
std::optional<PowerSum> autonomousProfile(const ProblemSpec& spec);
bool isAutonomous(const ProblemSpec& spec);

struct CriticalAmplitudes {
    double gamma = 0.0;  ///< sign change of f(r, .): f < 0 below, f > 0 above
    double theta = 0.0;  ///< root of F(r, .) above gamma; 0 when f >= 0
};

/// Sign change point of f and root of its primitive for a fixed radius.
/// Closed form for ModelAB; bisection to 1e-12 on power-sum profiles.
CriticalAmplitudes criticalAmplitudes(const ProblemSpec& spec, double r = 0.0);
CriticalAmplitudes criticalAmplitudes(const PowerSum& f);

std::string describe(const ProblemSpec& spec);

}  // namespace plap
