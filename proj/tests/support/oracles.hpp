#pragma once

// Reference values computed without the library's integrator or time-map
// code: closed forms, boost tanh-sinh quadrature and finite differences.

#include <boost/math/quadrature/tanh_sinh.hpp>

#include <cmath>
#include <functional>
#include <numbers>

namespace plap::oracle {

/// Lowest radial Dirichlet eigenfunction of -Laplace on the unit ball for
/// n = 3, normalized to 1 at the origin.
inline double sinc3(double r) {
    const double x = std::numbers::pi * r;
    return r == 0.0 ? 1.0 : std::sin(x) / x;
}

/// Same for n = 1.
inline double cosHalf(double r) { return std::cos(0.5 * std::numbers::pi * r); }

/// Fourth-order central difference.
inline double derivative(const std::function<double(double)>& g, double x, double h) {
    return (g(x - 2 * h) - 8 * g(x - h) + 8 * g(x + h) - g(x + 2 * h)) / (12 * h);
}

/// lambda(alpha) for u'' style p-Laplace problems on (-1, 1) with autonomous f:
/// lambda^{1/p} = int_0^alpha [p/(p-1) (F(alpha) - F(s))]^{-1/p} ds,
/// integrated with tanh-sinh directly in s (no substitution).
inline double timeMap(const std::function<double(double)>& F, double p, double alpha) {
    boost::math::quadrature::tanh_sinh<double> ts;
    const double Fa = F(alpha);
    const double fa = derivative(F, alpha, 1e-3 * alpha);
    const double dfa = (derivative(F, alpha * (1 + 1e-3), 1e-3 * alpha) - derivative(F, alpha * (1 - 1e-3), 1e-3 * alpha)) /
                       (2e-3 * alpha);
    auto g = [&](double s, double xc) {
        // F(alpha) - F(s) cancels as s -> alpha; switch to its Taylor
        // expansion in the complement the quadrature hands us.
        double d;
        if (xc > 0.0 && xc < 1e-4 * alpha)
            d = fa * xc - 0.5 * dfa * xc * xc;
        else
            d = Fa - F(xc > 0.0 ? alpha - xc : s);
        return std::pow(p / (p - 1.0) * d, -1.0 / p);
    };
    const double half = ts.integrate(g, 0.0, alpha);
    return std::pow(half, p);
}

/// Extinction parameter of the f(0) < 0 branch: u'(1) = 0, so alpha = theta
/// and lambda0^{1/p} = int_0^theta [p/(p-1) (-F(s))]^{-1/p} ds.
inline double extinctionLambda(const std::function<double(double)>& F, double p, double theta) {
    boost::math::quadrature::tanh_sinh<double> ts;
    const double ft = derivative(F, theta, 1e-3 * theta);
    auto g = [&](double s, double xc) {
        // F(theta) = 0, so -F(theta - xc) ~ f(theta) xc near the top.
        const double minusF = xc > 0.0 && xc < 1e-6 * theta ? ft * xc : -F(xc > 0.0 ? theta - xc : s);
        return std::pow(p / (p - 1.0) * minusF, -1.0 / p);
    };
    return std::pow(ts.integrate(g, 0.0, theta), p);
}


}  // namespace plap::oracle
