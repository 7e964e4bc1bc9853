#pragma once

#include <algorithm>
#include <cmath>
#include <span>

#include "twrde/version.hpp"

namespace twrde {

inline constexpr double kLn2 = 0.6931471805599453094172321;

// ln cosh(a) = |a| + ln(1 + e^{-2|a|}) - ln 2; exact for a = 0, no overflow.
inline double lncosh(double a) {
    double aa = std::fabs(a);
    return aa + std::log1p(std::exp(-2.0 * aa)) - kLn2;
}

inline double clip(double x, double bound) { return std::clamp(x, -bound, bound); }

// 2 atanh(p) with the argument pulled inside +-(1 - kAtanhGuard), then clipped.
inline double atanh2_clipped(double p, double bound = kClipBound) {
    double guard = 1.0 - kAtanhGuard;
    return clip(2.0 * std::atanh(std::clamp(p, -guard, guard)), bound);
}

// Sum-product check-node combine of a full incoming message set.
inline double check_update_sample(std::span<const double> incoming, double bound = kClipBound) {
    double prod = 1.0;
    for (double m : incoming) prod *= std::tanh(0.5 * m);
    return atanh2_clipped(prod, bound);
}

inline double normal_cdf(double x) { return 0.5 * std::erfc(-x * 0.7071067811865475244); }

inline double sq(double x) { return x * x; }

}  // namespace twrde
