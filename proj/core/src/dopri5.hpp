#pragma once

// Dormand-Prince 5(4) step with Hairer's dense output, for two-component
// systems. Internal to plap_core.

#include "plap/dense_output.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace plap::detail {

using State = std::array<double, 2>;

struct StepOutcome {
    State y1{};
    State k7{};           // derivative at the step end (FSAL)
    State errorVector{};  // y5 - y4
    double errorNorm = 0.0;
    DenseTrack::Segment segment{};
};

inline constexpr double kC2 = 1.0 / 5.0, kC3 = 3.0 / 10.0, kC4 = 4.0 / 5.0, kC5 = 8.0 / 9.0;
inline constexpr double kA21 = 1.0 / 5.0;
inline constexpr double kA31 = 3.0 / 40.0, kA32 = 9.0 / 40.0;
inline constexpr double kA41 = 44.0 / 45.0, kA42 = -56.0 / 15.0, kA43 = 32.0 / 9.0;
inline constexpr double kA51 = 19372.0 / 6561.0, kA52 = -25360.0 / 2187.0, kA53 = 64448.0 / 6561.0,
                        kA54 = -212.0 / 729.0;
inline constexpr double kA61 = 9017.0 / 3168.0, kA62 = -355.0 / 33.0, kA63 = 46732.0 / 5247.0,
                        kA64 = 49.0 / 176.0, kA65 = -5103.0 / 18656.0;
inline constexpr double kA71 = 35.0 / 384.0, kA73 = 500.0 / 1113.0, kA74 = 125.0 / 192.0,
                        kA75 = -2187.0 / 6784.0, kA76 = 11.0 / 84.0;
inline constexpr double kE1 = 71.0 / 57600.0, kE3 = -71.0 / 16695.0, kE4 = 71.0 / 1920.0,
                        kE5 = -17253.0 / 339200.0, kE6 = 22.0 / 525.0, kE7 = -1.0 / 40.0;
inline constexpr double kD1 = -12715105075.0 / 11282082432.0, kD3 = 87487479700.0 / 32700410799.0,
                        kD4 = -10690763975.0 / 1880347072.0, kD5 = 701980252875.0 / 199316789632.0,
                        kD6 = -1453857185.0 / 822651844.0, kD7 = 69997945.0 / 29380423.0;

/// One trial step from (r, y) with derivative k1 = rhs(r, y). `scale` maps a
/// component pair (y0_i, y1_i) to its error weight.
template <class Rhs, class Scale>
StepOutcome dopri5Step(Rhs&& rhs, double r, const State& y, const State& k1, double h, Scale&& scale) {
    State k2, k3, k4, k5, k6, tmp;
    for (int i = 0; i < 2; ++i) tmp[i] = y[i] + h * kA21 * k1[i];
    k2 = rhs(r + kC2 * h, tmp);
    for (int i = 0; i < 2; ++i) tmp[i] = y[i] + h * (kA31 * k1[i] + kA32 * k2[i]);
    k3 = rhs(r + kC3 * h, tmp);
    for (int i = 0; i < 2; ++i) tmp[i] = y[i] + h * (kA41 * k1[i] + kA42 * k2[i] + kA43 * k3[i]);
    k4 = rhs(r + kC4 * h, tmp);
    for (int i = 0; i < 2; ++i)
        tmp[i] = y[i] + h * (kA51 * k1[i] + kA52 * k2[i] + kA53 * k3[i] + kA54 * k4[i]);
    k5 = rhs(r + kC5 * h, tmp);
    for (int i = 0; i < 2; ++i)
        tmp[i] = y[i] + h * (kA61 * k1[i] + kA62 * k2[i] + kA63 * k3[i] + kA64 * k4[i] + kA65 * k5[i]);
    k6 = rhs(r + h, tmp);

    StepOutcome out;
    for (int i = 0; i < 2; ++i)
        out.y1[i] = y[i] + h * (kA71 * k1[i] + kA73 * k3[i] + kA74 * k4[i] + kA75 * k5[i] + kA76 * k6[i]);
    out.k7 = rhs(r + h, out.y1);

    double sum = 0.0;
    for (int i = 0; i < 2; ++i) {
        const double e = h * (kE1 * k1[i] + kE3 * k3[i] + kE4 * k4[i] + kE5 * k5[i] + kE6 * k6[i] +
                              kE7 * out.k7[i]);
        out.errorVector[i] = e;
        const double sk = scale(i, y[i], out.y1[i]);
        sum += (e / sk) * (e / sk);
    }
    out.errorNorm = std::sqrt(sum / 2.0);

    auto& seg = out.segment;
    seg.r0 = r;
    seg.h = h;
    for (int i = 0; i < 2; ++i) {
        const double dy = out.y1[i] - y[i];
        const double bspl = h * k1[i] - dy;
        seg.coef[0][i] = y[i];
        seg.coef[1][i] = dy;
        seg.coef[2][i] = bspl;
        seg.coef[3][i] = dy - h * out.k7[i] - bspl;
        seg.coef[4][i] = h * (kD1 * k1[i] + kD3 * k3[i] + kD4 * k4[i] + kD5 * k5[i] + kD6 * k6[i] +
                              kD7 * out.k7[i]);
    }
    return out;
}

/// Standard step-size factor for a fifth-order pair.
inline double stepFactor(double errorNorm) {
    if (errorNorm == 0.0) return 5.0;
    return std::clamp(0.9 * std::pow(errorNorm, -0.2), 0.2, 5.0);
}

}  // namespace plap::detail
