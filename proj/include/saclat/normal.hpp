#pragma once

#include <cmath>
#include <numbers>

namespace saclat::normal {

inline double pdf(double z) {
    return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi);
}

/// Standard normal CDF.
inline double cdf(double z) {
    return 0.5 * std::erfc(-z / std::numbers::sqrt2);
}

/// log of the standard normal CDF.
///
/// Below z = -8 the asymptotic Mills-ratio series
///   Phi(z) ~ phi(z)/|z| * (1 - 1/z^2 + 3/z^4 - 15/z^6 + ...)
/// is summed up to its smallest term (relative error < 1e-13 at z = -8,
/// shrinking fast beyond), so the result stays finite long after erfc
/// underflows.
inline double log_cdf(double z) {
    if (z >= -8.0) {
        return std::log(cdf(z));
    }
    const double inv2 = 1.0 / (z * z);
    double term = 1.0;
    double series = 1.0;
    for (int k = 1; k < 200; ++k) {
        const double next = -term * (2.0 * k - 1.0) * inv2;
        if (std::abs(next) >= std::abs(term) || std::abs(next) < 1e-17) {
            break;
        }
        series += next;
        term = next;
    }
    return -0.5 * z * z - 0.5 * std::log(2.0 * std::numbers::pi) - std::log(-z) +
           std::log(series);
}

}  // namespace saclat::normal
