#include "plap/power_sum.hpp"

#include "plap/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace plap {
namespace {

constexpr double kExponentMergeTolerance = 1e-14;

double powTerm(double x, double e) {
    if (e == 0.0) return 1.0;
    if (e == 1.0) return x;
    if (e == 2.0) return x * x;
    if (e == 3.0) return x * x * x;
    return std::pow(x, e);
}

int signOf(double v) { return (v > 0.0) - (v < 0.0); }

double bisectRoot(const PowerSum& h, double a, double b, double ha) {
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (a + b);
        if (mid <= a || mid >= b) break;
        const double hm = h(mid);
        if (hm == 0.0) return mid;
        if (signOf(hm) == signOf(ha)) {
            a = mid;
            ha = hm;
        } else {
            b = mid;
        }
        if (b - a <= 1e-15 * std::max(1.0, std::abs(mid))) break;
    }
    return 0.5 * (a + b);
}

void dedupe(std::vector<double>& roots, double scale) {
    std::sort(roots.begin(), roots.end());
    std::vector<double> out;
    for (double r : roots) {
        if (out.empty() || r - out.back() > 1e-12 * std::max(1.0, scale)) out.push_back(r);
    }
    roots = std::move(out);
}

// Descartes-style isolation: roots of P on (0, inf) are those of
// H = x^{-e0} P, and between consecutive critical points of H (roots of H',
// which has one term fewer) H is monotone.
std::vector<double> isolate(const PowerSum& p, double lo, double hi) {
    std::vector<double> roots;
    if (p.isZero()) return roots;
    const double e0 = p.lowestExponent();
    if (lo == 0.0 && e0 > 0.0) roots.push_back(0.0);
    const PowerSum h = p.timesPower(-e0);
    if (h.terms().size() == 1) return roots;

    std::vector<double> crit = isolate(h.derivative(), lo, hi);
    std::vector<double> pts;
    pts.push_back(lo);
    for (double c : crit)
        if (c > lo && c < hi) pts.push_back(c);
    pts.push_back(hi);

    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        const double a = pts[i];
        const double b = pts[i + 1];
        const double ha = h(a);
        const double hb = h(b);
        if (ha == 0.0) {
            roots.push_back(a);
            continue;
        }
        if (hb != 0.0 && signOf(ha) != signOf(hb)) roots.push_back(bisectRoot(h, a, b, ha));
    }
    if (h(hi) == 0.0) roots.push_back(hi);
    // Touching roots sit on critical points and produce no sign change.
    constexpr double eps = std::numeric_limits<double>::epsilon();
    for (std::size_t i = 1; i + 1 < pts.size(); ++i) {
        const double c = pts[i];
        if (std::abs(h(c)) <= 1e3 * eps * h.magnitude(c)) roots.push_back(c);
    }
    dedupe(roots, hi);
    return roots;
}

}  // namespace

PowerSum::PowerSum(std::initializer_list<PowerTerm> terms) : terms_(terms) { normalize(); }

PowerSum::PowerSum(std::vector<PowerTerm> terms) : terms_(std::move(terms)) { normalize(); }

PowerSum PowerSum::polynomial(std::span<const double> ascending) {
    std::vector<PowerTerm> t;
    for (std::size_t k = 0; k < ascending.size(); ++k)
        t.push_back({ascending[k], static_cast<double>(k)});
    return PowerSum(std::move(t));
}

PowerSum PowerSum::polynomial(std::initializer_list<double> ascending) {
    return polynomial(std::span<const double>(ascending.begin(), ascending.size()));
}

PowerSum PowerSum::constant(double c) { return PowerSum({{c, 0.0}}); }

PowerSum PowerSum::monomial(double coefficient, double exponent) {
    return PowerSum({{coefficient, exponent}});
}

void PowerSum::normalize() {
    for (const auto& t : terms_) {
        if (!std::isfinite(t.coefficient) || !std::isfinite(t.exponent))
            throw SolverError(ErrorKind::InvalidArgument, "power sum term must be finite");
    }
    std::sort(terms_.begin(), terms_.end(),
              [](const PowerTerm& a, const PowerTerm& b) { return a.exponent < b.exponent; });
    std::vector<PowerTerm> merged;
    for (const auto& t : terms_) {
        if (!merged.empty() && std::abs(merged.back().exponent - t.exponent) <= kExponentMergeTolerance)
            merged.back().coefficient += t.coefficient;
        else
            merged.push_back(t);
    }
    std::erase_if(merged, [](const PowerTerm& t) { return t.coefficient == 0.0; });
    terms_ = std::move(merged);
}

double PowerSum::operator()(double x) const {
    double s = 0.0;
    for (const auto& t : terms_) s += t.coefficient * powTerm(x, t.exponent);
    return s;
}

double PowerSum::oddExtension(double x) const {
    if (x >= 0.0) return (*this)(x);
    double s = 0.0;
    for (const auto& t : terms_) s -= t.coefficient * powTerm(-x, t.exponent);
    return s;
}

double PowerSum::evenExtension(double x) const { return (*this)(std::abs(x)); }

double PowerSum::magnitude(double x) const {
    double s = 0.0;
    for (const auto& t : terms_) s += std::abs(t.coefficient * powTerm(x, t.exponent));
    return s;
}

PowerSum PowerSum::derivative() const {
    std::vector<PowerTerm> t;
    for (const auto& term : terms_)
        if (term.exponent != 0.0) t.push_back({term.coefficient * term.exponent, term.exponent - 1.0});
    return PowerSum(std::move(t));
}

PowerSum PowerSum::antiderivative() const {
    std::vector<PowerTerm> t;
    for (const auto& term : terms_) {
        if (term.exponent <= -1.0)
            throw SolverError(ErrorKind::InvalidArgument, "primitive needs exponents > -1");
        t.push_back({term.coefficient / (term.exponent + 1.0), term.exponent + 1.0});
    }
    return PowerSum(std::move(t));
}

PowerSum PowerSum::timesPower(double k) const {
    std::vector<PowerTerm> t = terms_;
    for (auto& term : t) term.exponent += k;
    return PowerSum(std::move(t));
}

PowerSum PowerSum::operator+(const PowerSum& other) const {
    std::vector<PowerTerm> t = terms_;
    t.insert(t.end(), other.terms_.begin(), other.terms_.end());
    return PowerSum(std::move(t));
}

PowerSum PowerSum::operator-(const PowerSum& other) const { return *this + other * -1.0; }

PowerSum PowerSum::operator*(const PowerSum& other) const {
    std::vector<PowerTerm> t;
    for (const auto& a : terms_)
        for (const auto& b : other.terms_) t.push_back({a.coefficient * b.coefficient, a.exponent + b.exponent});
    return PowerSum(std::move(t));
}

PowerSum PowerSum::operator*(double scale) const {
    std::vector<PowerTerm> t = terms_;
    for (auto& term : t) term.coefficient *= scale;
    return PowerSum(std::move(t));
}

bool PowerSum::isConstant() const {
    return terms_.empty() || (terms_.size() == 1 && terms_.front().exponent == 0.0);
}

bool PowerSum::isPolynomial() const {
    return std::all_of(terms_.begin(), terms_.end(), [](const PowerTerm& t) {
        return t.exponent >= 0.0 && std::floor(t.exponent) == t.exponent;
    });
}

double PowerSum::lowestExponent() const { return terms_.empty() ? 0.0 : terms_.front().exponent; }
double PowerSum::highestExponent() const { return terms_.empty() ? 0.0 : terms_.back().exponent; }
double PowerSum::lowestCoefficient() const { return terms_.empty() ? 0.0 : terms_.front().coefficient; }
double PowerSum::leadingCoefficient() const { return terms_.empty() ? 0.0 : terms_.back().coefficient; }

double PowerSum::valueAtZero() const {
    if (terms_.empty()) return 0.0;
    const auto& t = terms_.front();
    if (t.exponent < 0.0) return std::copysign(std::numeric_limits<double>::infinity(), t.coefficient);
    return t.exponent == 0.0 ? t.coefficient : 0.0;
}

std::vector<double> PowerSum::rootsIn(double lo, double hi) const {
    if (!(lo >= 0.0 && hi > lo && std::isfinite(hi)))
        throw SolverError(ErrorKind::InvalidArgument, "root isolation needs 0 <= lo < hi < inf");
    return isolate(*this, lo, hi);
}

SignSummary PowerSum::signOn(double lo, double hi) const {
    SignSummary s;
    if (isZero()) return s;
    std::vector<double> roots = rootsIn(lo, hi);
    const double guard = 1e-12 * (hi - lo);
    std::vector<double> pts{lo};
    for (double r : roots) {
        if (r > lo + guard && r < hi - guard) {
            if (!s.interiorRoot) s.interiorRoot = r;
            pts.push_back(r);
        }
    }
    pts.push_back(hi);
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        const double mid = 0.5 * (pts[i] + pts[i + 1]);
        const double v = (*this)(mid);
        if (v > 0.0) {
            s.anyPositive = true;
            if (!s.positiveWitness) s.positiveWitness = mid;
        } else if (v < 0.0) {
            s.anyNegative = true;
            if (!s.negativeWitness) s.negativeWitness = mid;
        }
    }
    return s;
}

double PowerSum::positiveRootBound() const {
    if (terms_.size() <= 1) return 1.0;
    const double lead = std::abs(terms_.back().coefficient);
    double rest = 0.0;
    for (std::size_t i = 0; i + 1 < terms_.size(); ++i) rest += std::abs(terms_[i].coefficient);
    const double gap = terms_.back().exponent - terms_[terms_.size() - 2].exponent;
    const double b = std::pow(rest / lead, 1.0 / gap);
    return std::max(1.0, b) * (1.0 + 1e-9) + 1e-9;
}

}  // namespace plap
