#include "plap/diagnostics.hpp"

#include "plap/error.hpp"
#include "plap/phi.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace plap {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double weight(double r, int n) { return n == 1 ? 1.0 : std::pow(r, n - 1); }

// Everything the identities need at one radius.
struct Point {
    double r = 0.0, u = 0.0, v = 0.0, uPrime = 0.0, w = 0.0, z = 0.0;
    double f = 0.0, fu = 0.0, fr = 0.0, F = 0.0, Fr = 0.0;  // lambda applied
};

Point makePoint(const RadialSolution& sol, double r, double u, double v, double w, double z) {
    const double p = sol.trajectory.p;
    const int n = sol.trajectory.n;
    const NonlinearityValues nl = evalExtended(sol.spec, r, u);
    const double lam = sol.lambda;
    Point pt;
    pt.r = r;
    pt.u = u;
    pt.v = v;
    pt.uPrime = phiInverse(v / weight(r, n), p);
    pt.w = w;
    pt.z = z;
    pt.f = lam * nl.f;
    pt.fu = lam * nl.fu;
    pt.fr = lam * nl.fr;
    pt.F = lam * nl.F;
    pt.Fr = lam * nl.Fr;
    return pt;
}

Point densePoint(const RadialSolution& sol, const LinearizedTrajectory& lin, double r) {
    const auto uv = sol.trajectory.dense(r);
    const auto wz = lin.dense(r);
    return makePoint(sol, r, uv[0], uv[1], wz[0], wz[1]);
}

struct Profiles {
    double p;
    int n;
    double xi(const Point& s) const { return (p - 1.0) * s.v * s.w - s.u * s.z; }
    double T(const Point& s) const {
        return s.r * s.uPrime * s.z + std::pow(s.r, n) * s.f * s.w + (n - p) * s.v * s.w;
    }
    double Q(const Point& s) const {
        return (p - 1.0) * s.r * s.v * s.uPrime + std::pow(s.r, n) * s.u * s.f + (n - p) * s.v * s.u;
    }
    double P(const Point& s) const {
        return (p - 1.0) * s.r * s.v * s.uPrime + p * std::pow(s.r, n) * s.F + (n - p) * s.v * s.u;
    }
    double I(const Point& s) const { return n * p * s.F - (n - p) * s.u * s.f + p * s.r * s.Fr; }
    double xiRhs(const Point& s) const { return weight(s.r, n) * s.w * (s.u * s.fu - (p - 1.0) * s.f); }
    double tRhs(const Point& s) const { return weight(s.r, n) * s.w * (p * s.f + s.r * s.fr); }
    double pRhs(const Point& s) const { return weight(s.r, n) * I(s); }
};

// Integral form of d/dr profile = rhs: the largest deviation of
// profile(r) - profile(r0) from the accumulated Gauss-Legendre integral of rhs
// over the linearized segments, against max |profile|.
template <class Profile, class Rhs>
IdentityResidual identityResidual(const RadialSolution& sol, const LinearizedTrajectory& lin, Profile&& profile,
                                  Rhs&& rhs) {
    IdentityResidual out;
    const auto& segs = lin.dense.segments();
    if (segs.empty()) return out;
    const double start = profile(densePoint(sol, lin, segs.front().r0));
    double accumulated = 0.0;
    out.scale = std::abs(start);
    for (const auto& seg : segs) {
        if (!(seg.h > 0.0)) continue;
        accumulated += boost::math::quadrature::gauss<double, 10>::integrate(
            [&](double x) { return rhs(densePoint(sol, lin, x)); }, seg.r0, seg.end());
        const double value = profile(densePoint(sol, lin, seg.end()));
        out.absolute = std::max(out.absolute, std::abs(value - start - accumulated));
        out.scale = std::max(out.scale, std::abs(value));
    }
    return out;
}

template <class G>
double refineRoot(G&& g, double a, double b) {
    double ga = g(a);
    for (int it = 0; it < 200 && b - a > 1e-13; ++it) {
        const double m = 0.5 * (a + b);
        const double gm = g(m);
        if ((gm > 0.0) == (ga > 0.0)) {
            a = m;
            ga = gm;
        } else {
            b = m;
        }
    }
    return 0.5 * (a + b);
}

// Nodes that carry information: positive u, excluding the boundary node.
std::size_t interiorCount(const RadialTrajectory& t) {
    std::size_t k = t.size() > 0 ? t.size() - 1 : 0;
    while (k > 0 && !(t.u[k - 1] > 0.0)) --k;
    return k;
}

HypothesisCheck make(std::string name, Verdict v, std::optional<double> witness = std::nullopt,
                     std::optional<double> value = std::nullopt, std::string detail = {}) {
    HypothesisCheck c;
    c.name = std::move(name);
    c.verdict = v;
    c.witness = witness;
    c.value = value;
    c.detail = std::move(detail);
    return c;
}

std::optional<double> witnessOf(const SignSummary& s, bool wantPositive) {
    if (wantPositive) {
        if (s.negativeWitness) return s.negativeWitness;
    } else if (s.positiveWitness) {
        return s.positiveWitness;
    }
    return s.interiorRoot;
}

// Polynomial must be > 0 on (0, 1).
HypothesisCheck positiveOn(std::string name, const PowerSum& poly, double lo = 0.0, double hi = 1.0) {
    const SignSummary s = poly.signOn(lo, hi);
    if (s.strictlyPositive()) return make(std::move(name), Verdict::Pass);
    auto w = witnessOf(s, true);
    if (!w) w = 0.5 * (lo + hi);
    return make(std::move(name), Verdict::Fail, w, poly(*w));
}

// Polynomial must be >= 0 (nonNegative = true) or <= 0 on (0, 1).
HypothesisCheck signedOn(std::string name, const PowerSum& poly, bool nonNegative, double lo = 0.0,
                         double hi = 1.0) {
    const SignSummary s = poly.signOn(lo, hi);
    const bool ok = nonNegative ? s.nonNegative() : s.nonPositive();
    if (ok) return make(std::move(name), Verdict::Pass);
    const auto w = nonNegative ? s.negativeWitness : s.positiveWitness;
    return make(std::move(name), Verdict::Fail, w, w ? std::optional<double>(poly(*w)) : std::nullopt);
}

HypothesisCheck subcriticalCheck(double p, int n, double q) {
    const double lower = std::min(1.0, p - 1.0);
    const double crit = criticalExponent(p, n);
    std::ostringstream os;
    os << "q = " << q << ", bounds (" << lower << ", " << crit << ")";
    if (!(q > lower)) return make("subcritical growth", Verdict::Fail, q, lower, os.str() + ": q below the lower bound");
    if (!(q < crit)) {
        std::ostringstream c;
        c << os.str() << ": supercritical, critical exponent " << crit;
        return make("subcritical growth", Verdict::Fail, q, crit, c.str());
    }
    return make("subcritical growth", Verdict::Pass, std::nullopt, crit, os.str());
}

const PowerSum& identityX() {
    static const PowerSum x = PowerSum::monomial(1.0, 1.0);
    return x;
}

void radialCoefficientChecks(HypothesisReport& rep, double p, int n, const ModelAB& m) {
    const PowerSum& a = m.a.poly();
    const PowerSum& b = m.b.poly();
    const PowerSum da = a.derivative(), db = b.derivative();
    const PowerSum dda = da.derivative(), ddb = db.derivative();
    const PowerSum& x = identityX();
    rep.add(subcriticalCheck(p, n, m.q));
    rep.add(positiveOn("coefficient a > 0", a));
    rep.add(positiveOn("coefficient b > 0", b));
    rep.add(signedOn("coefficient a' >= 0", da, true));
    rep.add(signedOn("coefficient b' <= 0", db, false));
    const PowerSum A = a * p + x * da;
    rep.add(positiveOn("A positive", A));
    rep.add(signedOn("A non-decreasing", da * (p + 1.0) + x * dda, true));
    const double K = n * p / (m.q + 1.0) - (n - p);
    rep.add(positiveOn("B positive", b * K + x * db * (p / (m.q + 1.0))));
    rep.add(signedOn("rb'/b non-increasing", b * (db + x * ddb) - x * db * db, false));
    rep.add(signedOn("rb' non-increasing", db + x * ddb, false));
}

void pureBChecks(HypothesisReport& rep, double p, int n, const PureB& m) {
    const PowerSum& b = m.b.poly();
    const PowerSum db = b.derivative();
    const PowerSum ddb = db.derivative();
    const PowerSum& x = identityX();
    const double th = m.bPower;
    rep.add(subcriticalCheck(p, n, m.q));
    rep.add(positiveOn("coefficient b > 0", b));
    // For b^theta the conditions reduce to sign conditions on polynomials in b.
    rep.add(signedOn("coefficient b' <= 0", db * th, false));
    rep.add(signedOn("rb'/b non-increasing", (b * (db + x * ddb) - x * db * db) * th, false));
    rep.add(signedOn("rb' non-increasing", (x * db * db * (th - 1.0) + b * (db + x * ddb)) * th, false));
}

void oneDimChecks(HypothesisReport& rep, double p, const PowerSum& f) {
    // f < 0 on (0, gamma), f > 0 above.
    CriticalAmplitudes c;
    try {
        Autonomous1D a(f);
        c = criticalAmplitudes(f);
        const double bound = f.positiveRootBound();
        const bool negNear = f.lowestCoefficient() < 0.0;
        const SignSummary below = c.gamma > 0.0 ? f.signOn(0.0, c.gamma) : SignSummary{};
        const SignSummary above = f.signOn(std::max(c.gamma, 0.0), std::max(bound, c.gamma) + 1.0);
        const bool ok = (c.gamma == 0.0 || below.strictlyNegative()) && above.strictlyPositive() &&
                        f.leadingCoefficient() > 0.0;
        std::ostringstream os;
        os << "gamma = " << c.gamma << ", theta = " << c.theta;
        if (!negNear) os << " (f >= 0: degenerate gamma = 0)";
        if (ok) {
            rep.add(make("sign pattern of f", Verdict::Pass, c.gamma, c.gamma, os.str()));
        } else {
            auto w = above.negativeWitness ? above.negativeWitness
                                           : (below.positiveWitness ? below.positiveWitness : above.interiorRoot);
            if (!w) w = c.gamma;
            rep.add(make("sign pattern of f", Verdict::Fail, w, f(*w), os.str()));
        }
    } catch (const SolverError& e) {
        rep.add(make("sign pattern of f", Verdict::Fail, 0.0, std::nullopt, e.what()));
    }
    // u f' - (p-1) f > 0 for u > gamma.
    const PowerSum g = identityX() * f.derivative() - f * (p - 1.0);
    const double hi = std::max({g.positiveRootBound(), c.gamma + 1.0, 1.0}) * 2.0;
    HypothesisCheck c3 = positiveOn("u f' - (p-1) f > 0", g, c.gamma, hi);
    if (c3.pass() && !(g.leadingCoefficient() > 0.0)) {
        c3.verdict = Verdict::Fail;
        c3.witness = hi;
        c3.value = g(hi);
    }
    rep.add(c3);
    // -f(s) < c0 s^{p-1} for small s, when f(0) = 0.
    if (f.valueAtZero() != 0.0) {
        rep.add(make("growth of -f near 0", Verdict::NotApplicable, std::nullopt, std::nullopt, "f(0) != 0"));
    } else {
        const double e = f.lowestExponent();
        std::ostringstream os;
        os << "empirical growth exponent at 0: " << e;
        const bool ok = f.lowestCoefficient() > 0.0 || e >= p - 1.0;
        rep.add(make("growth of -f near 0", ok ? Verdict::Pass : Verdict::Fail, ok ? std::nullopt : std::optional<double>(1e-6),
                     e, os.str()));
    }
    // Growth: f / u^q -> positive limit for some q > min(1, p-1).
    const double q = f.highestExponent();
    const bool growth = f.leadingCoefficient() > 0.0 && q > std::min(1.0, p - 1.0);
    rep.add(make("growth", growth ? Verdict::Pass : Verdict::Fail, growth ? std::nullopt : std::optional<double>(q),
                 q, "leading exponent"));
}

}  // namespace

std::string_view toString(Verdict v) noexcept {
    switch (v) {
        case Verdict::Pass: return "PASS";
        case Verdict::Fail: return "FAIL";
        case Verdict::Indeterminate: return "INDETERMINATE";
        case Verdict::NotApplicable: return "N/A";
    }
    return "?";
}

std::string_view toString(IdentityCase c) noexcept {
    switch (c) {
        case IdentityCase::CaseI: return "i";
        case IdentityCase::CaseII: return "ii";
        case IdentityCase::CaseIII: return "iii";
        case IdentityCase::Indeterminate: return "indeterminate";
        case IdentityCase::None: return "none";
    }
    return "?";
}

void HypothesisReport::add(HypothesisCheck check) { checks.push_back(std::move(check)); }

void HypothesisReport::append(const HypothesisReport& other) {
    checks.insert(checks.end(), other.checks.begin(), other.checks.end());
}

bool HypothesisReport::allPass() const {
    return std::none_of(checks.begin(), checks.end(), [](const auto& c) { return c.verdict == Verdict::Fail; });
}

const HypothesisCheck* HypothesisReport::find(std::string_view name) const {
    for (const auto& c : checks)
        if (c.name == name) return &c;
    return nullptr;
}

double signChangeRadius(const RadialSolution& sol) {
    const RadialTrajectory& t = sol.trajectory;
    const std::size_t m = interiorCount(t);
    auto fAt = [&](std::size_t k) { return evalExtended(sol.spec, t.r[k], t.u[k]).f; };
    for (std::size_t k = 0; k + 1 < m; ++k) {
        if (fAt(k) > 0.0 && !(fAt(k + 1) > 0.0)) {
            if (t.dense.empty()) return t.r[k + 1];
            return refineRoot([&](double r) { return evalExtended(sol.spec, r, t.dense(r)[0]).f; }, t.r[k],
                              t.r[k + 1]);
        }
    }
    return 1.0;
}

std::vector<double> energyAlong(const RadialSolution& sol) {
    const RadialTrajectory& t = sol.trajectory;
    std::vector<double> e(t.size());
    for (std::size_t k = 0; k < t.size(); ++k) {
        const double F = evalExtended(sol.spec, t.r[k], t.u[k]).F;
        e[k] = (t.p - 1.0) / t.p * std::pow(std::abs(t.uPrime[k]), t.p) + sol.lambda * F;
    }
    return e;
}

IdentityProfiles identityProfiles(const RadialSolution& sol, const LinearizedTrajectory& lin) {
    const RadialTrajectory& t = sol.trajectory;
    if (lin.r.size() != t.size())
        throw SolverError(ErrorKind::Precondition, "linearized trajectory does not share the solution grid");
    const Profiles pr{t.p, t.n};
    IdentityProfiles out;
    out.r = t.r;
    for (std::size_t k = 0; k < t.size(); ++k) {
        const Point s = makePoint(sol, t.r[k], t.u[k], t.v[k], lin.w[k], lin.z[k]);
        out.xi.push_back(pr.xi(s));
        out.T.push_back(pr.T(s));
        out.Q.push_back(pr.Q(s));
        out.P.push_back(pr.P(s));
        out.I.push_back(pr.I(s));
        const double den = s.u * s.fu - (t.p - 1.0) * s.f;
        out.alphaFn.push_back(den != 0.0 ? (t.p * s.f + s.r * s.fr) / den : kNaN);
    }
    if (!lin.dense.empty() && !t.dense.empty()) {
        out.xiResidual = identityResidual(sol, lin, [&](const Point& s) { return pr.xi(s); },
                                          [&](const Point& s) { return pr.xiRhs(s); });
        out.tResidual = identityResidual(sol, lin, [&](const Point& s) { return pr.T(s); },
                                         [&](const Point& s) { return pr.tRhs(s); });
        out.pResidual = identityResidual(sol, lin, [&](const Point& s) { return pr.P(s); },
                                         [&](const Point& s) { return pr.pRhs(s); });
    }
    out.r2 = signChangeRadius(sol);
    out.boundaryValue = (t.p - 1.0) * std::pow(std::abs(t.uPrimeEnd()), t.p);
    return out;
}

HypothesisReport qualitativeChecks(const RadialSolution& sol) {
    const RadialTrajectory& t = sol.trajectory;
    HypothesisReport rep;
    const double up1 = t.uPrimeEnd();
    rep.add(make("Hopf u'(1) < 0", up1 < 0.0 ? Verdict::Pass : Verdict::Fail, 1.0, up1));

    std::optional<double> bad;
    for (std::size_t k = 0; k + 1 < t.size(); ++k) {
        if (!(t.uPrime[k] < 0.0)) {
            bad = t.r[k];
            break;
        }
    }
    rep.add(make("u' < 0 on (0,1)", bad ? Verdict::Fail : Verdict::Pass, bad,
                 bad ? std::optional<double>(t.stateAt(*bad)[1]) : std::nullopt));

    const double f0 = evalNonlinearity(sol.spec, 0.0, sol.alpha).f;
    rep.add(make("f(0,u(0)) > 0", f0 > 0.0 ? Verdict::Pass : Verdict::Fail, 0.0, f0));

    // Sign pattern of f(r, u(r)): + throughout, or + then - exactly once.
    {
        const std::size_t m = interiorCount(t);
        int changes = 0;
        std::optional<double> w;
        bool negativeFirst = false;
        double prev = evalExtended(sol.spec, t.r[0], t.u[0]).f;
        if (!(prev > 0.0)) {
            negativeFirst = true;
            w = t.r[0];
        }
        for (std::size_t k = 1; k < m; ++k) {
            const double cur = evalExtended(sol.spec, t.r[k], t.u[k]).f;
            if ((cur > 0.0) != (prev > 0.0)) {
                ++changes;
                if (cur > 0.0 && !w) w = t.r[k];
            }
            prev = cur;
        }
        const bool ok = !negativeFirst && changes <= 1;
        std::ostringstream os;
        os << changes << " sign change(s)";
        const double r2 = signChangeRadius(sol);
        os << ", r2 = " << r2;
        rep.add(make("single sign change of f(r,u(r))", ok ? Verdict::Pass : Verdict::Fail, ok ? std::optional<double>(r2) : w,
                     r2, os.str()));
    }

    // Energy: constant for n = 1 autonomous, non-increasing when F_r <= 0.
    {
        const std::vector<double> e = energyAlong(sol);
        double scale = 0.0;
        for (std::size_t k = 0; k < t.size(); ++k) {
            scale = std::max(scale, std::abs(e[k]));
            scale = std::max(scale, (t.p - 1.0) / t.p * std::pow(std::abs(t.uPrime[k]), t.p));
        }
        if (t.n == 1 && isAutonomous(sol.spec)) {
            double dev = 0.0;
            std::optional<double> at;
            for (std::size_t k = 0; k < e.size(); ++k) {
                if (std::abs(e[k] - e[0]) > dev) {
                    dev = std::abs(e[k] - e[0]);
                    at = t.r[k];
                }
            }
            const double rel = dev / std::max(scale, 1e-300);
            rep.add(make("energy constant", rel < 1e-8 ? Verdict::Pass : Verdict::Fail, at, rel));
        } else {
            bool frNonPositive = true;
            for (std::size_t k = 0; k < t.size(); ++k) {
                const double Fr = evalExtended(sol.spec, t.r[k], t.u[k]).Fr;
                if (Fr > 1e-14) frNonPositive = false;
            }
            std::optional<double> at;
            double worst = 0.0;
            for (std::size_t k = 1; k < e.size(); ++k) {
                const double rise = e[k] - e[k - 1];
                if (rise > worst) {
                    worst = rise;
                    at = t.r[k];
                }
            }
            const double rel = worst / std::max(scale, 1e-300);
            Verdict v = rel < 1e-8 ? Verdict::Pass : Verdict::Fail;
            std::string detail;
            if (!frNonPositive) {
                v = Verdict::NotApplicable;
                detail = "F_r > 0 somewhere along the solution";
            }
            rep.add(make("energy non-increasing", v, v == Verdict::Fail ? at : std::nullopt, rel, detail));
        }
    }
    return rep;
}

HypothesisReport checkModelHypotheses(const ProblemSpec& spec) {
    HypothesisReport rep;
    const double p = spec.exponents.p;
    const int n = spec.exponents.n;
    if (const auto* m = std::get_if<ModelAB>(&spec.nonlinearity)) {
        radialCoefficientChecks(rep, p, n, *m);
    } else if (const auto* m = std::get_if<PureB>(&spec.nonlinearity)) {
        pureBChecks(rep, p, n, *m);
    } else if (const auto* m = std::get_if<Autonomous1D>(&spec.nonlinearity)) {
        oneDimChecks(rep, p, m->f());
    } else {
        oneDimChecks(rep, p, PowerSum::monomial(1.0, 1.0));
    }
    return rep;
}

HypothesisCheck alphaMonotonicityCheck(const RadialSolution& sol) {
    const RadialTrajectory& t = sol.trajectory;
    const double p = t.p;
    const std::size_t m = interiorCount(t);
    std::vector<std::pair<double, double>> values;
    std::size_t skipped = 0;
    for (std::size_t k = 0; k < m; ++k) {
        const NonlinearityValues nl = evalExtended(sol.spec, t.r[k], t.u[k]);
        const double den = t.u[k] * nl.fu - (p - 1.0) * nl.f;
        const double scale = std::abs(t.u[k] * nl.fu) + (p - 1.0) * std::abs(nl.f);
        if (!(den > 1e-12 * std::max(scale, 1e-300)) || scale == 0.0) {
            ++skipped;
            continue;
        }
        values.emplace_back(t.r[k], (p * nl.f + t.r[k] * nl.fr) / den);
    }
    std::ostringstream os;
    if (values.empty()) {
        return make("alpha(r) non-increasing", Verdict::NotApplicable, t.r.front(), 0.0,
                    "precondition fails: u f_u - (p-1) f has no positive margin");
    }
    if (skipped > 0) os << skipped << " node(s) skipped where the u f_u - (p-1) f margin is below 1e-12";
    for (std::size_t k = 1; k < values.size(); ++k) {
        const double prev = values[k - 1].second, cur = values[k].second;
        if (cur > prev + 1e-8 * std::max(1.0, std::abs(prev)))
            return make("alpha(r) non-increasing", Verdict::Fail, values[k].first, cur - prev, os.str());
    }
    return make("alpha(r) non-increasing", Verdict::Pass, std::nullopt, values.front().second, os.str());
}

IdentityCase classifyI(const IdentityProfiles& pr, const RadialSolution& sol) {
    const std::size_t m = interiorCount(sol.trajectory);
    double scale = 0.0;
    for (std::size_t k = 0; k < m; ++k) scale = std::max(scale, std::abs(pr.I[k]));
    if (scale == 0.0) return IdentityCase::Indeterminate;
    const double tie = 1e-12 * scale;
    // Trailing ties are the boundary tail where I -> 0 with u; ignore them.
    std::size_t end = m;
    while (end > 0 && std::abs(pr.I[end - 1]) < tie) --end;
    std::vector<int> signs;
    std::vector<double> radii;
    for (std::size_t k = 0; k < end; ++k) {
        if (std::abs(pr.I[k]) < tie) return IdentityCase::Indeterminate;
        signs.push_back(pr.I[k] > 0.0 ? 1 : -1);
        radii.push_back(pr.r[k]);
    }
    if (signs.empty()) return IdentityCase::Indeterminate;
    int changes = 0;
    for (std::size_t k = 1; k < signs.size(); ++k)
        if (signs[k] != signs[k - 1]) ++changes;
    if (changes == 0 && signs.front() < 0) return IdentityCase::CaseII;
    if (changes == 1 && signs.front() > 0) return IdentityCase::CaseIII;
    bool positiveBeforeR2 = true;
    for (std::size_t k = 0; k < signs.size(); ++k)
        if (radii[k] < pr.r2 && signs[k] < 0) positiveBeforeR2 = false;
    if (positiveBeforeR2) return IdentityCase::CaseI;
    return IdentityCase::None;
}

HypothesisReport solutionHypotheses(const RadialSolution& sol) {
    const RadialTrajectory& t = sol.trajectory;
    const double p = t.p;
    const int n = t.n;
    HypothesisReport rep;
    const std::size_t m = interiorCount(t);

    {
        std::optional<double> w;
        double worst = 0.0;
        for (std::size_t k = 0; k < t.size(); ++k) {
            if (evalNonlinearity(sol.spec, t.r[k], 0.0).f != 0.0) w = t.r[k];
            const double fr = evalExtended(sol.spec, t.r[k], std::max(t.u[k], 0.0)).fr;
            if (fr > worst) {
                worst = fr;
                if (!w) w = t.r[k];
            }
        }
        rep.add(make("f(r,0) = 0, f_r <= 0", w ? Verdict::Fail : Verdict::Pass, w, worst));
    }
    {
        std::optional<double> w;
        double minMargin = std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < m; ++k) {
            const NonlinearityValues nl = evalExtended(sol.spec, t.r[k], t.u[k]);
            const double margin = t.u[k] * nl.fu - (p - 1.0) * nl.f;
            if (margin < minMargin) minMargin = margin;
            if (!(margin > 0.0) && !w) w = t.r[k];
        }
        rep.add(make("u f_u - (p-1) f > 0", w ? Verdict::Fail : Verdict::Pass, w, minMargin));
    }
    rep.add(alphaMonotonicityCheck(sol));

    const double r2 = signChangeRadius(sol);
    const Verdict applies = p < n ? Verdict::Pass : Verdict::NotApplicable;
    {
        std::optional<double> w;
        double minVal = std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < m && t.r[k] < r2; ++k) {
            const NonlinearityValues nl = evalExtended(sol.spec, t.r[k], t.u[k]);
            const double val = t.u[k] * nl.f - p * nl.F;
            minVal = std::min(minVal, val);
            if (!(val > 0.0) && !w) w = t.r[k];
        }
        Verdict v = w ? Verdict::Fail : Verdict::Pass;
        if (applies == Verdict::NotApplicable) v = Verdict::NotApplicable;
        rep.add(make("u f - p F > 0 on (0,r2)", v, w, minVal, p < n ? "" : "only required when p < n"));
    }
    if (sol.linearized) {
        const IdentityProfiles pr = identityProfiles(sol, *sol.linearized);
        const IdentityCase c = classifyI(pr, sol);
        Verdict v = c == IdentityCase::None ? Verdict::Fail
                    : c == IdentityCase::Indeterminate ? Verdict::Indeterminate
                                                        : Verdict::Pass;
        if (applies == Verdict::NotApplicable) v = Verdict::NotApplicable;
        std::string detail = std::string("case ") + std::string(toString(c));
        std::optional<double> w;
        if (c == IdentityCase::None) w = pr.r2;
        rep.add(make("sign pattern of I", v, w, std::nullopt, detail));

        std::optional<double> zero;
        const auto& lin = *sol.linearized;
        for (std::size_t k = 1; k < lin.r.size(); ++k) {
            if (lin.r[k - 1] > r2 && (lin.w[k] > 0.0) != (lin.w[k - 1] > 0.0)) {
                zero = lin.r[k];
                break;
            }
        }
        rep.add(make("w has no zero on (r2,1)", zero ? Verdict::Fail : Verdict::Pass, zero, r2));
    } else {
        rep.add(make("sign pattern of I", Verdict::Indeterminate, std::nullopt, std::nullopt,
                     "no linearized trajectory"));
    }
    return rep;
}

OneDimIdentities oneDimIdentities(const RadialSolution& sol, const LinearizedTrajectory& lin) {
    const RadialTrajectory& t = sol.trajectory;
    const auto profile = autonomousProfile(sol.spec);
    if (t.n != 1 || !profile) throw SolverError(ErrorKind::Precondition, "one-dimensional identities need n = 1 and f(u)");
    if (lin.r.size() != t.size())
        throw SolverError(ErrorKind::Precondition, "linearized trajectory does not share the solution grid");
    const double p = t.p;
    OneDimIdentities out;

    auto wronskian = [&](const Point& s) { return -s.f * s.w - s.uPrime * s.z; };
    auto tOne = [&](const Point& s) { return s.r * s.uPrime * s.z + s.r * s.f * s.w - (p - 1.0) * s.v * s.w; };
    for (std::size_t k = 0; k < t.size(); ++k) {
        const Point s = makePoint(sol, t.r[k], t.u[k], t.v[k], lin.w[k], lin.z[k]);
        out.wronskian.push_back(wronskian(s));
        out.T.push_back(tOne(s));
        out.wronskianScale = std::max({out.wronskianScale, std::abs(s.f * s.w), std::abs(s.uPrime * s.z)});
    }
    for (double wv : out.wronskian) out.wronskianDeviation = std::max(out.wronskianDeviation, std::abs(wv - out.wronskian.front()));
    if (!lin.dense.empty())
        out.tResidual = identityResidual(sol, lin, tOne, [&](const Point& s) { return p * s.f * s.w; });
    {
        const std::vector<double> e = energyAlong(sol);
        double scale = 0.0;
        for (double x : e) scale = std::max(scale, std::abs(x));
        for (std::size_t k = 0; k < t.size(); ++k)
            scale = std::max(scale, (p - 1.0) / p * std::pow(std::abs(t.uPrime[k]), p));
        for (double x : e) out.energyDeviation = std::max(out.energyDeviation, std::abs(x - e.front()));
        if (scale > 0.0) out.energyDeviation /= scale;
    }

    const double wRel = out.wronskianScale > 0.0 ? out.wronskianDeviation / out.wronskianScale : 0.0;
    out.checks.add(make("Wronskian constant", wRel < 1e-7 ? Verdict::Pass : Verdict::Fail, std::nullopt, wRel));
    out.checks.add(make("T' = p lambda f w", out.tResidual.relative() < 1e-6 ? Verdict::Pass : Verdict::Fail,
                        std::nullopt, out.tResidual.relative()));
    out.checks.add(make("energy constant", out.energyDeviation < 1e-8 ? Verdict::Pass : Verdict::Fail,
                        std::nullopt, out.energyDeviation));

    const double gamma = criticalAmplitudes(*profile).gamma;
    if (gamma == 0.0) {
        out.checks.add(make("x0: u(x0) = gamma", Verdict::NotApplicable, std::nullopt, std::nullopt,
                            "f has no negative region (gamma = 0)"));
        return out;
    }
    if (!(sol.alpha > gamma)) {
        out.checks.add(make("x0: u(x0) = gamma", Verdict::Fail, 0.0, sol.alpha,
                            "u(0) <= gamma: contradicts f(u(0)) > 0"));
        return out;
    }
    std::optional<std::size_t> idx;
    for (std::size_t k = 1; k < t.size(); ++k) {
        if (t.u[k] <= gamma) {
            idx = k;
            break;
        }
    }
    if (!idx) {
        out.checks.add(make("x0: u(x0) = gamma", Verdict::Fail, 1.0, t.uEnd(), "u stays above gamma"));
        return out;
    }
    double x0 = t.r[*idx];
    if (*idx > 0 && !t.dense.empty())
        x0 = refineRoot([&](double r) { return t.dense(r)[0] - gamma; }, t.r[*idx - 1], t.r[*idx]);
    out.x0 = x0;
    const Point s = densePoint(sol, lin, x0);
    const double dphi = phiDerivative(s.uPrime, p);
    out.qAtX0 = dphi * ((1.0 - x0) * s.uPrime + s.u);
    out.combinationAtX0 = (p - 1.0) * s.v * s.w - s.u * s.z;
    out.wPrimeAtX0 = s.z / dphi;
    out.checks.add(make("x0: u(x0) = gamma", Verdict::Pass, x0, gamma));
    out.checks.add(make("q(x0) < 0", out.qAtX0 < 0.0 ? Verdict::Pass : Verdict::Fail, x0, out.qAtX0));

    // The combination and w'(x0) both integrate a positive quantity against w over (0, x0).
    bool wPositive = true;
    for (std::size_t k = 0; k < *idx; ++k)
        if (!(lin.w[k] > 0.0)) wPositive = false;
    const std::string cond = wPositive ? "" : "w changes sign on (0, x0); the conclusion needs w > 0 there";
    Verdict v7 = out.combinationAtX0 > 0.0 ? Verdict::Pass : Verdict::Fail;
    Verdict v8 = out.wPrimeAtX0 < 0.0 ? Verdict::Pass : Verdict::Fail;
    if (!wPositive) v7 = v8 = Verdict::NotApplicable;
    out.checks.add(make("combination > 0 at x0", v7, x0, out.combinationAtX0, cond));
    out.checks.add(make("w'(x0) < 0", v8, x0, out.wPrimeAtX0, cond));
    return out;
}

}  // namespace plap
