#pragma once

// Goodness-of-fit helpers: Kolmogorov-Smirnov tests, Q-Q points, one-way ANOVA.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <span>
#include <stdexcept>
#include <vector>

#include <boost/math/special_functions/beta.hpp>

namespace saclat::stats {

struct KSResult {
    double statistic = 0.0;  // D
    double p_value = 1.0;
};

/// Upper tail of the asymptotic Kolmogorov distribution, P(K > lambda).
inline double kolmogorov_survival(double lambda) {
    if (lambda <= 0.0) {
        return 1.0;
    }
    double p = 0.0;
    if (lambda < 1.18) {
        // Jacobi-theta form; the alternating series converges slowly here.
        const double pi2 = std::numbers::pi * std::numbers::pi;
        double cdf = 0.0;
        for (int k = 1; k <= 20; ++k) {
            const double m = 2.0 * k - 1.0;
            cdf += std::exp(-m * m * pi2 / (8.0 * lambda * lambda));
        }
        p = 1.0 - std::sqrt(2.0 * std::numbers::pi) / lambda * cdf;
    } else {
        double sign = 1.0;
        for (int k = 1; k <= 100; ++k) {
            const double term = std::exp(-2.0 * k * k * lambda * lambda);
            p += sign * term;
            if (term < 1e-18) {
                break;
            }
            sign = -sign;
        }
        p *= 2.0;
    }
    return std::clamp(p, std::numeric_limits<double>::min(), 1.0);
}

/// Asymptotic p-value for a KS distance D at effective sample size ne.
inline double ks_p_value(double d, double ne) {
    const double root = std::sqrt(ne);
    return kolmogorov_survival((root + 0.12 + 0.11 / root) * d);
}

inline KSResult ks_two_sample(std::span<const double> a, std::span<const double> b) {
    if (a.empty() || b.empty()) {
        throw std::invalid_argument("ks_two_sample: empty sample");
    }
    std::vector<double> x(a.begin(), a.end());
    std::vector<double> y(b.begin(), b.end());
    std::sort(x.begin(), x.end());
    std::sort(y.begin(), y.end());
    const double nx = static_cast<double>(x.size());
    const double ny = static_cast<double>(y.size());
    std::size_t i = 0;
    std::size_t j = 0;
    double d = 0.0;
    while (i < x.size() && j < y.size()) {
        const double v = std::min(x[i], y[j]);
        while (i < x.size() && x[i] == v) {
            ++i;
        }
        while (j < y.size() && y[j] == v) {
            ++j;
        }
        d = std::max(d, std::abs(static_cast<double>(i) / nx - static_cast<double>(j) / ny));
    }
    return {d, ks_p_value(d, nx * ny / (nx + ny))};
}

/// One-sample test against an analytic CDF.
template <class Cdf>
KSResult ks_one_sample(std::span<const double> a, Cdf&& cdf) {
    if (a.empty()) {
        throw std::invalid_argument("ks_one_sample: empty sample");
    }
    std::vector<double> x(a.begin(), a.end());
    std::sort(x.begin(), x.end());
    const double n = static_cast<double>(x.size());
    double d = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double f = cdf(x[i]);
        d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
    }
    return {d, ks_p_value(d, n)};
}

/// Quantile of a sorted sample, linear interpolation between order statistics
/// placed at plotting positions (i - 0.5)/n.
inline double empirical_quantile(std::span<const double> sorted, double prob) {
    if (sorted.empty()) {
        throw std::invalid_argument("empirical_quantile: empty sample");
    }
    const double n = static_cast<double>(sorted.size());
    const double h = std::clamp(prob * n - 0.5, 0.0, n - 1.0);
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const auto hi = std::min(lo + 1, sorted.size() - 1);
    return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

/// One Q-Q pair. Plotted with the reference on x and the observation on y, so
/// a point under the diagonal means the reference overestimates.
struct QQPoint {
    double observed = 0.0;
    double reference = 0.0;
};

struct QQResult {
    std::vector<QQPoint> points;  // levels (i - 0.5)/count
    QQPoint band_low;             // 2.5% quantiles
    QQPoint band_high;            // 97.5% quantiles
};

namespace detail {

template <class RefQuantile>
QQResult qq_impl(std::span<const double> observed, RefQuantile&& ref, std::size_t count) {
    if (observed.empty() || count == 0) {
        throw std::invalid_argument("qq_points: empty input");
    }
    std::vector<double> x(observed.begin(), observed.end());
    std::sort(x.begin(), x.end());
    QQResult out;
    out.points.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        const double level = (static_cast<double>(i) + 0.5) / static_cast<double>(count);
        out.points.push_back({empirical_quantile(x, level), ref(level)});
    }
    out.band_low = {empirical_quantile(x, 0.025), ref(0.025)};
    out.band_high = {empirical_quantile(x, 0.975), ref(0.975)};
    return out;
}

}  // namespace detail

/// Sample against sample.
inline QQResult qq_points(std::span<const double> observed, std::span<const double> reference,
                          std::size_t count) {
    if (reference.empty()) {
        throw std::invalid_argument("qq_points: empty input");
    }
    std::vector<double> r(reference.begin(), reference.end());
    std::sort(r.begin(), r.end());
    return detail::qq_impl(observed, [&](double level) { return empirical_quantile(r, level); },
                           count);
}

/// Sample against a distribution given by its quantile function.
template <class Quantile>
QQResult qq_points_vs(std::span<const double> observed, Quantile&& quantile, std::size_t count) {
    return detail::qq_impl(observed, quantile, count);
}

struct AnovaResult {
    double f = 0.0;
    double p_value = 1.0;
    double df_between = 0.0;
    double df_within = 0.0;
};

inline AnovaResult one_way_anova(std::span<const std::vector<double>> groups) {
    if (groups.size() < 2) {
        throw std::invalid_argument("one_way_anova: need at least two groups");
    }
    double total = 0.0;
    std::size_t n = 0;
    for (const auto& g : groups) {
        if (g.size() < 2) {
            throw std::invalid_argument("one_way_anova: every group needs >= 2 values");
        }
        for (double v : g) {
            total += v;
        }
        n += g.size();
    }
    const double grand = total / static_cast<double>(n);
    double ss_between = 0.0;
    double ss_within = 0.0;
    for (const auto& g : groups) {
        double m = 0.0;
        for (double v : g) {
            m += v;
        }
        m /= static_cast<double>(g.size());
        ss_between += static_cast<double>(g.size()) * (m - grand) * (m - grand);
        for (double v : g) {
            ss_within += (v - m) * (v - m);
        }
    }
    AnovaResult r;
    r.df_between = static_cast<double>(groups.size() - 1);
    r.df_within = static_cast<double>(n - groups.size());
    if (!(ss_within > 0.0)) {
        throw std::invalid_argument("one_way_anova: zero within-group variance");
    }
    r.f = (ss_between / r.df_between) / (ss_within / r.df_within);
    if (r.f == 0.0) {
        r.p_value = 1.0;
    } else {
        // P(F > f) = I_{df2/(df2 + df1 f)}(df2/2, df1/2)
        const double x = r.df_within / (r.df_within + r.df_between * r.f);
        r.p_value = boost::math::ibeta(r.df_within / 2.0, r.df_between / 2.0, x);
    }
    return r;
}

}  // namespace saclat::stats
