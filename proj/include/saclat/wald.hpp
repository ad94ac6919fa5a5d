#pragma once

// First-passage time of drifted Brownian motion A(t) = nu*t + W(t) (unit
// diffusion) through a barrier at alpha: the Wald / inverse-Gaussian law.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>

#include "saclat/normal.hpp"

namespace saclat {

/// Threshold / drift pair of a Wald first-passage distribution.
class IGParams {
public:
    IGParams(double alpha, double nu) : alpha_(alpha), nu_(nu) {
        if (!(alpha > 0.0) || !std::isfinite(alpha)) {
            throw std::domain_error("IGParams: alpha must be positive and finite, got " +
                                    std::to_string(alpha));
        }
        if (!(nu > 0.0) || !std::isfinite(nu)) {
            throw std::domain_error("IGParams: nu must be positive and finite, got " +
                                    std::to_string(nu));
        }
    }

    /// From the textbook (mean mu, shape lambda) parameterization:
    /// mu = alpha/nu, lambda = alpha^2.
    static IGParams from_mean_shape(double mean, double shape) {
        if (!(mean > 0.0) || !(shape > 0.0)) {
            throw std::domain_error("IGParams: mean and shape must be positive");
        }
        const double alpha = std::sqrt(shape);
        return {alpha, alpha / mean};
    }

    double alpha() const { return alpha_; }
    double nu() const { return nu_; }

    double shape() const { return alpha_ * alpha_; }

    friend bool operator==(const IGParams&, const IGParams&) = default;

private:
    double alpha_;
    double nu_;
};

namespace wald {

inline double mean(const IGParams& p) { return p.alpha() / p.nu(); }

inline double variance(const IGParams& p) { return p.alpha() / (p.nu() * p.nu() * p.nu()); }

inline double log_pdf(double t, const IGParams& p) {
    if (!std::isfinite(t)) {
        throw std::domain_error("wald::pdf: non-finite time");
    }
    if (t <= 0.0) {
        return -std::numeric_limits<double>::infinity();
    }
    const double a = p.alpha();
    const double r = a - p.nu() * t;
    return std::log(a) - 0.5 * std::log(2.0 * std::numbers::pi) - 1.5 * std::log(t) -
           r * r / (2.0 * t);
}

/// alpha / sqrt(2 pi t^3) * exp(-(alpha - nu t)^2 / (2t)); zero for t <= 0.
inline double pdf(double t, const IGParams& p) {
    const double lp = log_pdf(t, p);
    return std::exp(lp);
}

namespace detail {

// exp(2 nu alpha) * Phi(-(alpha + nu t)/sqrt t), evaluated in log space since
// 2 nu alpha alone overflows a double for realistic parameters.
inline double reflected_term(double t, const IGParams& p) {
    const double z = -(p.alpha() + p.nu() * t) / std::sqrt(t);
    return std::exp(2.0 * p.nu() * p.alpha() + normal::log_cdf(z));
}

inline void check_time(double t, const char* what) {
    if (std::isnan(t) || t < 0.0) {
        throw std::domain_error(std::string(what) + ": time must be >= 0");
    }
}

}  // namespace detail

/// P(T > t) = Phi((alpha - nu t)/sqrt t) - exp(2 nu alpha) Phi((-alpha - nu t)/sqrt t).
inline double survival(double t, const IGParams& p) {
    detail::check_time(t, "wald::survival");
    if (t == 0.0) {
        return 1.0;
    }
    if (std::isinf(t)) {
        return 0.0;
    }
    const double z = (p.alpha() - p.nu() * t) / std::sqrt(t);
    const double s = normal::cdf(z) - detail::reflected_term(t, p);
    return std::clamp(s, 0.0, 1.0);
}

/// P(T <= t). Same identity as 1 - survival, written with both terms
/// positive so small probabilities keep their relative precision.
inline double cdf(double t, const IGParams& p) {
    detail::check_time(t, "wald::cdf");
    if (t == 0.0) {
        return 0.0;
    }
    if (std::isinf(t)) {
        return 1.0;
    }
    const double z = (p.nu() * t - p.alpha()) / std::sqrt(t);
    const double c = normal::cdf(z) + detail::reflected_term(t, p);
    return std::clamp(c, 0.0, 1.0);
}

/// Inverse CDF by bracketing bisection. Slow but exact to ~1e-14 relative;
/// also serves as the reference sampler path.
inline double quantile(double prob, const IGParams& p) {
    if (!(prob >= 0.0 && prob <= 1.0)) {
        throw std::domain_error("wald::quantile: probability outside [0, 1]");
    }
    if (prob == 0.0) {
        return 0.0;
    }
    if (prob == 1.0) {
        return std::numeric_limits<double>::infinity();
    }
    double lo = 0.0;
    double hi = mean(p);
    while (cdf(hi, p) < prob) {
        lo = hi;
        hi *= 2.0;
    }
    for (int i = 0; i < 200 && hi - lo > 1e-15 * hi; ++i) {
        const double mid = 0.5 * (lo + hi);
        (cdf(mid, p) < prob ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

/// Exact draw by the transformation-with-multiple-roots method
/// (Michael, Schucany & Haas).
template <class URBG>
double sample(const IGParams& p, URBG& rng) {
    const double mu = mean(p);
    const double lambda = p.shape();
    const double n = std::normal_distribution<double>{}(rng);
    const double u = std::uniform_real_distribution<double>{}(rng);
    const double r = mu * n * n;
    double x = mu;
    if (r > 0.0) {
        // Smaller root mu + mu/(2 lambda) (r - sqrt(r^2 + 4 lambda r)), rewritten
        // without cancellation.
        const double s = std::sqrt(r * r + 4.0 * lambda * r);
        x = mu * 4.0 * lambda * r / ((r + s) * (r + s));
    }
    return u <= mu / (mu + x) ? x : mu * mu / x;
}

/// Reference sampler: inverse CDF of a uniform draw.
template <class URBG>
double sample_by_inversion(const IGParams& p, URBG& rng) {
    double u = 0.0;
    while (u == 0.0) {
        u = std::uniform_real_distribution<double>{}(rng);
    }
    return quantile(u, p);
}

/// Density p(t, a) of an unabsorbed path sitting at evidence a at time t,
/// with the absorbing barrier at alpha:
///   (1/sqrt(2 pi t)) (exp[-(a - nu t)^2/2t] - exp[2 nu alpha - (a - 2 alpha - nu t)^2/2t]).
/// Integrating over a in (-inf, alpha] gives the survival function.
inline double fp_joint_density(double t, double a, const IGParams& p) {
    if (!(t > 0.0) || !std::isfinite(t) || !std::isfinite(a)) {
        throw std::domain_error("wald::fp_joint_density: need finite t > 0 and finite a");
    }
    if (a > p.alpha()) {
        throw std::domain_error("wald::fp_joint_density: evidence above the absorbing barrier");
    }
    const double sd = std::sqrt(t);
    const double direct = normal::pdf((a - p.nu() * t) / sd) / sd;
    // The image term equals direct * exp(2 alpha (a - alpha) / t).
    return direct * -std::expm1(2.0 * p.alpha() * (a - p.alpha()) / t);
}

}  // namespace wald
}  // namespace saclat
