#pragma once

// Foveal-peripheral dual task: two independent accumulators, the saccade waits
// for both, T_dual = max(T_f, T_p).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "saclat/latency_model.hpp"
#include "saclat/nelder_mead.hpp"
#include "saclat/stats.hpp"
#include "saclat/wald.hpp"

namespace saclat {

struct DualParams {
    IGParams foveal;
    IGParams peripheral;
};

namespace dual {

/// F_dual(t) = F_f(t) F_p(t).
inline double cdf(double t, const DualParams& d) {
    if (t <= 0.0) {
        return 0.0;
    }
    return wald::cdf(t, d.foveal) * wald::cdf(t, d.peripheral);
}

/// f_dual(t) = f_f(t) F_p(t) + F_f(t) f_p(t).
inline double pdf(double t, const DualParams& d) {
    if (t <= 0.0) {
        return 0.0;
    }
    return wald::pdf(t, d.foveal) * wald::cdf(t, d.peripheral) +
           wald::cdf(t, d.foveal) * wald::pdf(t, d.peripheral);
}

struct DualDraw {
    double foveal = 0.0;
    double peripheral = 0.0;
    double total = 0.0;
};

template <class URBG>
DualDraw sample_components(const DualParams& d, URBG& rng) {
    const double f = wald::sample(d.foveal, rng);
    const double p = wald::sample(d.peripheral, rng);
    return {f, p, std::max(f, p)};
}

template <class URBG>
double sample(const DualParams& d, URBG& rng) {
    return sample_components(d, rng).total;
}

/// One observed dual-task latency with the per-condition rates of its
/// foveal and peripheral stimuli.
struct Trial {
    double t = 0.0;
    double nu_f = 0.0;
    double nu_p = 0.0;
};

inline constexpr double kLikelihoodFloor = 1e-300;

inline double log_likelihood(double alpha_f, double alpha_p, std::span<const Trial> trials) {
    double ll = 0.0;
    for (const auto& tr : trials) {
        const DualParams d{{alpha_f, tr.nu_f}, {alpha_p, tr.nu_p}};
        ll += std::log(std::max(pdf(tr.t, d), kLikelihoodFloor));
    }
    return ll;
}

struct FitOptions {
    std::size_t restarts = 3;
    std::uint64_t seed = 0;
    double restart_spread = 0.3;  // sd of log-threshold perturbation per restart
    optimize::NelderMeadOptions simplex{};
};

struct DualFit {
    double alpha_f = 0.0;
    double alpha_p = 0.0;
    double log_likelihood = 0.0;
    std::size_t iterations = 0;
    bool converged = false;
};

namespace detail {

inline void check_trials(std::span<const Trial> trials) {
    if (trials.size() < 2) {
        throw std::invalid_argument("dual fit: need at least two trials");
    }
    for (const auto& tr : trials) {
        if (!(tr.t > 0.0) || !(tr.nu_f > 0.0) || !(tr.nu_p > 0.0) || !std::isfinite(tr.t) ||
            !std::isfinite(tr.nu_f) || !std::isfinite(tr.nu_p)) {
            throw std::invalid_argument("dual fit: trials need positive t, nu_f, nu_p");
        }
    }
}

inline double pooled_alpha(std::span<const Trial> trials) {
    std::vector<double> ts;
    ts.reserve(trials.size());
    for (const auto& tr : trials) {
        ts.push_back(tr.t);
    }
    return latency::estimate_alpha(ts);
}

}  // namespace detail

/// Maximum-likelihood thresholds (alpha_f, alpha_p) with the rates held fixed.
/// Simplex search over log thresholds, started at the pooled moment estimate
/// and at seeded perturbations of it; the best run wins. Non-convergence of
/// the best run is reported through `converged`, not thrown.
inline DualFit fit_thresholds(std::span<const Trial> trials, const FitOptions& opt = {}) {
    detail::check_trials(trials);
    const double start = std::log(detail::pooled_alpha(trials));
    auto objective = [&](const std::vector<double>& x) {
        if (!std::isfinite(x[0]) || !std::isfinite(x[1]) || std::abs(x[0]) > 50.0 ||
            std::abs(x[1]) > 50.0) {
            return 1e300;
        }
        return -log_likelihood(std::exp(x[0]), std::exp(x[1]), trials);
    };
    std::mt19937_64 rng(opt.seed);
    std::normal_distribution<double> jitter(0.0, opt.restart_spread);
    DualFit best;
    bool have = false;
    const std::size_t runs = std::max<std::size_t>(1, opt.restarts);
    for (std::size_t r = 0; r < runs; ++r) {
        std::vector<double> x0{start, start};
        if (r > 0) {
            x0[0] += jitter(rng);
            x0[1] += jitter(rng);
        }
        const auto res = optimize::nelder_mead(objective, x0, opt.simplex);
        if (!have || -res.value > best.log_likelihood) {
            best = {std::exp(res.x[0]), std::exp(res.x[1]), -res.value, res.iterations,
                    res.converged};
            have = true;
        }
    }
    return best;
}

enum class Component { foveal, peripheral };

struct SingleFit {
    double alpha = 0.0;
    double log_likelihood = 0.0;
    bool converged = false;
};

/// Baseline: a single accumulator driven only by the foveal (or peripheral)
/// rate, threshold by maximum likelihood.
inline SingleFit fit_single_threshold(std::span<const Trial> trials, Component which,
                                      const optimize::NelderMeadOptions& simplex = {}) {
    detail::check_trials(trials);
    auto ll = [&](double alpha) {
        double s = 0.0;
        for (const auto& tr : trials) {
            const IGParams p{alpha, which == Component::foveal ? tr.nu_f : tr.nu_p};
            s += std::log(std::max(wald::pdf(tr.t, p), kLikelihoodFloor));
        }
        return s;
    };
    auto objective = [&](const std::vector<double>& x) {
        if (!std::isfinite(x[0]) || std::abs(x[0]) > 50.0) {
            return 1e300;
        }
        return -ll(std::exp(x[0]));
    };
    const auto res =
        optimize::nelder_mead(objective, {std::log(detail::pooled_alpha(trials))}, simplex);
    return {std::exp(res.x[0]), -res.value, res.converged};
}

/// Trials pooled over conditions: model CDF is the mixture of per-condition
/// CDFs weighted by how often each (nu_f, nu_p) pair occurs.
class MixtureCdf {
public:
    template <class ConditionCdf>
    MixtureCdf(std::span<const Trial> trials, ConditionCdf cdf) {
        std::map<std::pair<double, double>, std::size_t> counts;
        for (const auto& tr : trials) {
            ++counts[{tr.nu_f, tr.nu_p}];
        }
        for (const auto& [rates, count] : counts) {
            components_.push_back({rates.first, rates.second,
                                   static_cast<double>(count) / static_cast<double>(trials.size())});
        }
        cdf_ = [cdf](double t, double nu_f, double nu_p) { return cdf(t, nu_f, nu_p); };
    }

    double operator()(double t) const {
        double s = 0.0;
        for (const auto& c : components_) {
            s += c.weight * cdf_(t, c.nu_f, c.nu_p);
        }
        return s;
    }

private:
    struct Entry {
        double nu_f;
        double nu_p;
        double weight;
    };
    std::vector<Entry> components_;
    std::function<double(double, double, double)> cdf_;
};

inline std::vector<double> latencies(std::span<const Trial> trials) {
    std::vector<double> ts;
    ts.reserve(trials.size());
    for (const auto& tr : trials) {
        ts.push_back(tr.t);
    }
    return ts;
}

/// K.S. test of the pooled latencies against the fitted dual model.
inline stats::KSResult ks_dual(std::span<const Trial> trials, double alpha_f, double alpha_p) {
    const MixtureCdf mix(trials, [=](double t, double nf, double np) {
        return cdf(t, DualParams{{alpha_f, nf}, {alpha_p, np}});
    });
    return stats::ks_one_sample(latencies(trials), mix);
}

/// K.S. test against a single-accumulator model.
inline stats::KSResult ks_single(std::span<const Trial> trials, double alpha, Component which) {
    const MixtureCdf mix(trials, [=](double t, double nf, double np) {
        return wald::cdf(t, IGParams{alpha, which == Component::foveal ? nf : np});
    });
    return stats::ks_one_sample(latencies(trials), mix);
}

}  // namespace dual
}  // namespace saclat
