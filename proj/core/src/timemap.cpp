#include "plap/timemap.hpp"

#include "plap/error.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <sstream>

namespace plap {

CriticalAmplitudes criticalPoints(const Autonomous1D& f) {
    const PowerSum& g = f.f();
    if (g.isZero()) throw SolverError(ErrorKind::Admissibility, "f vanishes identically");
    const double bound = g.positiveRootBound();
    std::vector<double> roots;
    for (double r : g.rootsIn(0.0, bound))
        if (r > 0.0) roots.push_back(r);
    if (g.leadingCoefficient() < 0.0)
        throw SolverError(ErrorKind::Admissibility, "f is negative for large u");
    const bool negativeNearZero = g.lowestCoefficient() < 0.0;
    if (!negativeNearZero) {
        // Any positive root would have to be a touching root or a sign change back.
        const SignSummary s = g.signOn(0.0, bound + 1.0);
        if (s.anyNegative || !roots.empty())
            throw SolverError(ErrorKind::Admissibility, "f changes sign without being negative near zero");
        return {};
    }
    if (roots.size() != 1) {
        std::ostringstream os;
        os << "f must change sign exactly once on (0, inf); found " << roots.size() << " roots";
        throw SolverError(ErrorKind::Admissibility, os.str());
    }
    const CriticalAmplitudes c = criticalAmplitudes(g);
    if (!(c.theta > c.gamma)) throw SolverError(ErrorKind::Admissibility, "primitive of f has no root above gamma");
    return c;
}

TimeMapResult timeMapLambda(const Autonomous1D& fn, double p, double alpha, const TimeMapOptions& options) {
    if (!(p > 1.0)) throw SolverError(ErrorKind::InvalidArgument, "p must exceed 1");
    if (!(alpha > 0.0)) throw SolverError(ErrorKind::InvalidArgument, "alpha must be positive");
    const PowerSum& f = fn.f();
    const PowerSum& F = fn.primitive();
    const double fAlpha = f(alpha);
    if (!(fAlpha > 0.0)) {
        std::ostringstream os;
        os << "f(alpha) = " << fAlpha << ": the time map is singular unless f(alpha) > 0";
        throw SolverError(ErrorKind::Admissibility, os.str(), alpha);
    }
    const CriticalAmplitudes c = criticalAmplitudes(f);
    if (c.theta > 0.0 && std::abs(alpha - c.theta) < 1e-9)
        throw SolverError(ErrorKind::Admissibility, "alpha within 1e-9 of theta: F(alpha) = 0", alpha);
    const double top = F(alpha);
    std::vector<double> checkpoints{0.0};
    for (double r : f.rootsIn(0.0, alpha))
        if (r > 0.0 && r < alpha) checkpoints.push_back(r);
    for (double s : checkpoints) {
        if (!(top > F(s))) {
            std::ostringstream os;
            os << "F(alpha) - F(s) <= 0 at s = " << s << " (F(alpha) = " << top << ")";
            throw SolverError(ErrorKind::Admissibility, os.str(), s);
        }
    }

    const double m = p / (p - 1.0);
    const double cst = std::pow(m, 1.0 - 1.0 / p);
    // Mean value of f over [alpha - d, alpha]; the difference quotient loses
    // digits for small d, where a fixed Gauss rule on f is exact enough.
    auto meanSlope = [&](double d) {
        if (d > 0.01 * alpha) return (top - F(alpha - d)) / d;
        return boost::math::quadrature::gauss<double, 20>::integrate(
            [&](double t) { return f(alpha - t * d); }, 0.0, 1.0);
    };
    // sigma = tau^j with the smallest j making j*m an integer keeps the
    // integrand smooth at tau = 0 for the common rational p.
    int j = 1;
    for (int k = 1; k <= 4; ++k) {
        if (std::abs(k * m - std::round(k * m)) < 1e-12) {
            j = k;
            break;
        }
    }
    auto integrand = [&](double tau) {
        const double sigma = std::pow(tau, j);
        const double jacobian = j == 1 ? 1.0 : j * std::pow(tau, j - 1);
        const double d = std::min(alpha, std::pow(sigma, m));
        if (d <= 0.0) return jacobian * cst * std::pow(fAlpha, -1.0 / p);
        return jacobian * cst * std::pow(meanSlope(d), -1.0 / p);
    };

    const double sigmaMax = std::pow(std::pow(alpha, 1.0 / m), 1.0 / j);
    TimeMapResult out;
    out.alpha = alpha;
    double integral = 0.0;
    double error = 0.0;
    if (options.fixedPanels) {
        const int panels = std::max(1, *options.fixedPanels);
        const double w = sigmaMax / panels;
        for (int k = 0; k < panels; ++k)
            integral += boost::math::quadrature::gauss<double, 20>::integrate(integrand, k * w, (k + 1) * w);
        error = std::numeric_limits<double>::quiet_NaN();
    } else {
        double l1 = 0.0;
        integral = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(integrand, 0.0, sigmaMax, 12,
                                                                                 options.relTol, &error, &l1);
    }
    out.lambda = std::pow(integral, p);
    out.quadratureErrorEstimate = p * error / integral;
    for (int k = 0; k <= 8; ++k) {
        const double s = sigmaMax * k / 8.0;
        out.integrandSamples.emplace_back(s, integrand(s));
    }
    return out;
}

}  // namespace plap
