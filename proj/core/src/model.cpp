#include "plap/model.hpp"

#include "plap/error.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace plap {
namespace {

double safePow(double x, double e) {
    if (e == 0.0) return 1.0;
    if (e == 1.0) return x;
    return std::pow(x, e);
}

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void checkCoefficient(const CoefficientFn& c, const char* name) {
    const PowerSum& poly = c.poly();
    if (!poly.isPolynomial() || poly.highestExponent() > 8.0)
        throw SolverError(ErrorKind::InvalidArgument,
                          std::string(name) + ": coefficient must be a polynomial of degree <= 8");
}

NonlinearityValues evalPowerFamily(const ProblemSpec& spec, double r, double u) {
    const double p = spec.exponents.p;
    return std::visit(
        Overloaded{
            [&](const ModelAB& m) {
                const double a = m.a.value(r), ar = m.a.slope(r);
                const double b = m.b.value(r), br = m.b.slope(r);
                const double up = safePow(u, p - 1.0);
                const double uq = safePow(u, m.q);
                const double upp = safePow(u, p);
                const double uq1 = safePow(u, m.q + 1.0);
                NonlinearityValues v;
                v.f = -a * up + b * uq;
                v.fu = -(p - 1.0) * a * safePow(u, p - 2.0) + m.q * b * safePow(u, m.q - 1.0);
                if (p == 2.0) v.fu = -a + m.q * b * safePow(u, m.q - 1.0);
                v.fr = -ar * up + br * uq;
                v.F = -a * upp / p + b * uq1 / (m.q + 1.0);
                v.Fr = -ar * upp / p + br * uq1 / (m.q + 1.0);
                return v;
            },
            [&](const PureB& m) {
                const double b = m.b.value(r), br = m.b.slope(r);
                double c = 1.0, cr = 0.0;
                if (m.bPower != 0.0) {
                    c = safePow(b, m.bPower);
                    cr = m.bPower == 1.0 ? br : m.bPower * safePow(b, m.bPower - 1.0) * br;
                }
                const double uq = safePow(u, m.q);
                const double uq1 = safePow(u, m.q + 1.0);
                NonlinearityValues v;
                v.f = c * uq;
                v.fu = m.q * c * safePow(u, m.q - 1.0);
                v.fr = cr * uq;
                v.F = c * uq1 / (m.q + 1.0);
                v.Fr = cr * uq1 / (m.q + 1.0);
                return v;
            },
            [&](const Autonomous1D& m) {
                NonlinearityValues v;
                v.f = m.f()(u);
                v.fu = m.fPrime()(u);
                v.F = m.primitive()(u);
                return v;
            },
            [&](const LinearTest&) {
                NonlinearityValues v;
                v.f = u;
                v.fu = 1.0;
                v.F = 0.5 * u * u;
                return v;
            },
        },
        spec.nonlinearity);
}

}  // namespace

CoefficientFn::CoefficientFn() : CoefficientFn(PowerSum::constant(1.0)) {}

CoefficientFn::CoefficientFn(PowerSum poly) : poly_(std::move(poly)), slope_(poly_.derivative()) {}

Autonomous1D::Autonomous1D() : Autonomous1D(PowerSum::monomial(1.0, 3.0)) {}

Autonomous1D::Autonomous1D(PowerSum f)
    : f_(std::move(f)), fPrime_(f_.derivative()), primitive_(f_.antiderivative()) {
    if (f_.lowestExponent() < 0.0)
        throw SolverError(ErrorKind::InvalidArgument, "f(u) must be bounded at u = 0");
}

double criticalExponent(double p, int n) {
    const double nd = static_cast<double>(n);
    if (nd <= p) return std::numeric_limits<double>::infinity();
    return (nd * p - nd + p) / (nd - p);
}

std::optional<double> growthExponent(const ProblemSpec& spec) {
    if (const auto* m = std::get_if<ModelAB>(&spec.nonlinearity)) return m->q;
    if (const auto* m = std::get_if<PureB>(&spec.nonlinearity)) return m->q;
    return std::nullopt;
}

void validate(const ProblemSpec& spec, bool requireSubcritical) {
    const double p = spec.exponents.p;
    const int n = spec.exponents.n;
    if (!(p > 1.0) || !std::isfinite(p))
        throw SolverError(ErrorKind::InvalidArgument, "p: must satisfy p > 1");
    if (n < 1) throw SolverError(ErrorKind::InvalidArgument, "n: must satisfy n >= 1");
    if (!(spec.lambda > 0.0) || !std::isfinite(spec.lambda))
        throw SolverError(ErrorKind::InvalidArgument, "lambda: must be positive");
    if (const auto* m = std::get_if<ModelAB>(&spec.nonlinearity)) {
        checkCoefficient(m->a, "a");
        checkCoefficient(m->b, "b");
    }
    if (const auto* m = std::get_if<PureB>(&spec.nonlinearity)) {
        checkCoefficient(m->b, "b");
        if (!(m->bPower >= 0.0))
            throw SolverError(ErrorKind::InvalidArgument, "b_power: must be non-negative");
    }
    if (auto q = growthExponent(spec)) {
        if (!(*q > std::min(1.0, p - 1.0)))
            throw SolverError(ErrorKind::InvalidArgument, "q: must satisfy q > min(1, p-1)");
        if (requireSubcritical && !(*q < criticalExponent(p, n))) {
            std::ostringstream os;
            os << "q: supercritical for n > p (critical exponent " << criticalExponent(p, n) << ")";
            throw SolverError(ErrorKind::InvalidArgument, os.str());
        }
    }
}

ProblemSpec makeProblem(Exponents exponents, Nonlinearity nonlinearity, double lambda,
                        bool requireSubcritical) {
    ProblemSpec spec{exponents, std::move(nonlinearity), lambda};
    validate(spec, requireSubcritical);
    return spec;
}

NonlinearityValues evalNonlinearity(const ProblemSpec& spec, double r, double u) {
    if (u < 0.0) throw SolverError(ErrorKind::InvalidArgument, "nonlinearity evaluated at u < 0", r);
    return evalPowerFamily(spec, r, u);
}

NonlinearityValues evalExtended(const ProblemSpec& spec, double r, double u) {
    if (u >= 0.0) return evalPowerFamily(spec, r, u);
    if (const auto* m = std::get_if<Autonomous1D>(&spec.nonlinearity)) {
        NonlinearityValues v;
        if (m->f().isPolynomial()) {
            v.f = m->f()(u);
            v.fu = m->fPrime()(u);
            v.F = m->primitive()(u);
        } else {
            v.f = m->f().oddExtension(u);
            v.fu = m->fPrime().evenExtension(u);
            v.F = m->primitive().evenExtension(u);
        }
        return v;
    }
    if (std::holds_alternative<LinearTest>(spec.nonlinearity)) return evalPowerFamily(spec, r, u);
    NonlinearityValues v = evalPowerFamily(spec, r, -u);
    v.f = -v.f;
    v.fr = -v.fr;
    return v;
}

std::optional<PowerSum> autonomousProfile(const ProblemSpec& spec) {
    const double p = spec.exponents.p;
    return std::visit(
        Overloaded{
            [&](const ModelAB& m) -> std::optional<PowerSum> {
                if (!m.a.isConstant() || !m.b.isConstant()) return std::nullopt;
                return PowerSum({{-m.a.value(0.0), p - 1.0}, {m.b.value(0.0), m.q}});
            },
            [&](const PureB& m) -> std::optional<PowerSum> {
                if (!m.b.isConstant()) return std::nullopt;
                const double c = m.bPower == 0.0 ? 1.0 : std::pow(m.b.value(0.0), m.bPower);
                return PowerSum::monomial(c, m.q);
            },
            [&](const Autonomous1D& m) -> std::optional<PowerSum> { return m.f(); },
            [&](const LinearTest&) -> std::optional<PowerSum> { return PowerSum::monomial(1.0, 1.0); },
        },
        spec.nonlinearity);
}

bool isAutonomous(const ProblemSpec& spec) { return autonomousProfile(spec).has_value(); }

CriticalAmplitudes criticalAmplitudes(const PowerSum& f) {
    CriticalAmplitudes c;
    if (f.isZero()) return c;
    const double bound = f.positiveRootBound();
    double gamma = 0.0;
    for (double root : f.rootsIn(0.0, bound)) {
        if (root > 0.0) {
            gamma = root;
            break;
        }
    }
    const bool negativeNearZero = f.lowestCoefficient() < 0.0;
    if (gamma == 0.0 && !negativeNearZero) return c;
    c.gamma = gamma;
    const PowerSum primitive = f.antiderivative();
    const double lo = gamma;
    const double hi = std::max(primitive.positiveRootBound(), lo * 2.0 + 1.0);
    for (double root : primitive.rootsIn(lo, hi)) {
        if (root > lo) {
            c.theta = root;
            break;
        }
    }
    return c;
}

CriticalAmplitudes criticalAmplitudes(const ProblemSpec& spec, double r) {
    if (const auto* m = std::get_if<ModelAB>(&spec.nonlinearity)) {
        const double p = spec.exponents.p;
        const double a = m->a.value(r), b = m->b.value(r);
        const double k = m->q - p + 1.0;
        CriticalAmplitudes c;
        c.gamma = std::pow(a / b, 1.0 / k);
        c.theta = std::pow((m->q + 1.0) * a / (p * b), 1.0 / k);
        return c;
    }
    if (auto f = autonomousProfile(spec)) return criticalAmplitudes(*f);
    return {};
}

std::string describe(const ProblemSpec& spec) {
    std::ostringstream os;
    os << "p=" << spec.exponents.p << " n=" << spec.exponents.n << " lambda=" << spec.lambda << " f=";
    auto poly = [&](const PowerSum& s, const char* var) {
        bool first = true;
        for (const auto& t : s.terms()) {
            if (!first) os << (t.coefficient < 0 ? " - " : " + ");
            else if (t.coefficient < 0) os << "-";
            first = false;
            os << std::abs(t.coefficient);
            if (t.exponent != 0.0) os << "*" << var << "^" << t.exponent;
        }
        if (first) os << "0";
    };
    std::visit(Overloaded{
                   [&](const ModelAB& m) {
                       os << "-(";
                       poly(m.a.poly(), "r");
                       os << ")u^(p-1) + (";
                       poly(m.b.poly(), "r");
                       os << ")u^" << m.q;
                   },
                   [&](const PureB& m) {
                       os << "(";
                       poly(m.b.poly(), "r");
                       os << ")^" << m.bPower << " u^" << m.q;
                   },
                   [&](const Autonomous1D& m) { poly(m.f(), "u"); },
                   [&](const LinearTest&) { os << "u"; },
               },
               spec.nonlinearity);
    return os.str();
}

}  // namespace plap
