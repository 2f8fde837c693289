#include "plap/dense_output.hpp"

#include <algorithm>

namespace plap {

DenseTrack::Value DenseTrack::Segment::eval(double r) const {
    double theta = (r - r0) / h;
    if (reversed) theta = 1.0 - theta;
    const double theta1 = 1.0 - theta;
    Value out{};
    for (std::size_t i = 0; i < 2; ++i) {
        const double v = coef[0][i] +
                         theta * (coef[1][i] + theta1 * (coef[2][i] + theta * (coef[3][i] + theta1 * coef[4][i])));
        out[i] = sign[i] * v;
    }
    return out;
}

void DenseTrack::append(const Segment& segment) { segments_.push_back(segment); }

void DenseTrack::sortSegments() {
    std::sort(segments_.begin(), segments_.end(),
              [](const Segment& a, const Segment& b) { return a.r0 < b.r0; });
}

double DenseTrack::begin() const { return segments_.empty() ? 0.0 : segments_.front().r0; }

double DenseTrack::end() const { return segments_.empty() ? 0.0 : segments_.back().end(); }

std::size_t DenseTrack::locate(double r) const {
    auto it = std::upper_bound(segments_.begin(), segments_.end(), r,
                               [](double x, const Segment& s) { return x < s.r0; });
    if (it == segments_.begin()) return 0;
    return static_cast<std::size_t>(std::distance(segments_.begin(), it) - 1);
}

DenseTrack::Value DenseTrack::operator()(double r) const { return segments_[locate(r)].eval(r); }

}  // namespace plap
