#pragma once

// Brute-force Euler-Maruyama simulation of the evidence accumulator. Used as an
// oracle for the closed-form first-passage law in wald.hpp.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <thread>
#include <vector>

#include "saclat/wald.hpp"

namespace saclat {

struct SimConfig {
    double dt = 1e-4;
    double max_time = 10.0;
    std::uint64_t seed = 0;
    // Also test for a crossing between grid points via the Brownian-bridge
    // probability exp(-2 (alpha - a0)(alpha - a1) / dt). Without it the walk
    // only sees the barrier at grid points and passage times run late by
    // O(sqrt(dt)).
    bool bridge = true;

    void validate() const {
        if (!(dt > 0.0) || !std::isfinite(dt)) {
            throw std::invalid_argument("SimConfig: dt must be positive");
        }
        if (!(max_time > 0.0) || !std::isfinite(max_time)) {
            throw std::invalid_argument("SimConfig: max_time must be positive");
        }
        if (max_time / dt > 1e9) {
            throw std::invalid_argument("SimConfig: max_time/dt exceeds 1e9 steps");
        }
    }
};

/// Single path: A <- A + nu dt + sqrt(dt) N(0,1) from A = 0. Returns the
/// crossing instant, linearly interpolated between the bracketing steps, or
/// nullopt when max_time is reached first (censored). With cfg.bridge, a step
/// that ends below the barrier still counts as a crossing with the bridge
/// probability, timed at the step midpoint.
template <class URBG>
std::optional<double> simulate_first_passage(const IGParams& p, const SimConfig& cfg,
                                             URBG& rng) {
    cfg.validate();
    std::normal_distribution<double> noise;
    std::uniform_real_distribution<double> unit;
    const double drift = p.nu() * cfg.dt;
    const double scale = std::sqrt(cfg.dt);
    const auto max_steps = static_cast<std::uint64_t>(std::ceil(cfg.max_time / cfg.dt));
    double a = 0.0;
    for (std::uint64_t k = 1; k <= max_steps; ++k) {
        const double next = a + drift + scale * noise(rng);
        if (next >= p.alpha()) {
            const double frac = (p.alpha() - a) / (next - a);
            return (static_cast<double>(k - 1) + frac) * cfg.dt;
        }
        if (cfg.bridge) {
            // exp(-40) ~ 4e-18: treat as no crossing and skip the draw.
            const double expo = 2.0 * (p.alpha() - a) * (p.alpha() - next) / cfg.dt;
            if (expo < 40.0 && unit(rng) < std::exp(-expo)) {
                return (static_cast<double>(k) - 0.5) * cfg.dt;
            }
        }
        a = next;
    }
    return std::nullopt;
}

struct Ensemble {
    std::vector<double> times;  // uncensored passage times, in path order
    std::size_t censored = 0;

    double censored_fraction() const {
        const std::size_t n = times.size() + censored;
        return n == 0 ? 0.0 : static_cast<double>(censored) / static_cast<double>(n);
    }
};

/// Independent RNG stream for one path, derived from (seed, path index) so an
/// ensemble does not depend on how paths are scheduled across threads.
inline std::mt19937_64 path_stream(std::uint64_t seed, std::uint64_t index) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
    return std::mt19937_64(seq);
}

/// n independent paths. Result is identical for any thread count.
inline Ensemble simulate_ensemble(const IGParams& p, const SimConfig& cfg, std::size_t n,
                                  unsigned threads = 1) {
    cfg.validate();
    std::vector<std::optional<double>> out(n);
    auto worker = [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            auto rng = path_stream(cfg.seed, i);
            out[i] = simulate_first_passage(p, cfg, rng);
        }
    };
    threads = std::max(1u, threads);
    if (threads == 1 || n < 2 * threads) {
        worker(0, n);
    } else {
        std::vector<std::jthread> pool;
        const std::size_t chunk = (n + threads - 1) / threads;
        for (std::size_t begin = 0; begin < n; begin += chunk) {
            pool.emplace_back(worker, begin, std::min(n, begin + chunk));
        }
    }
    Ensemble e;
    e.times.reserve(n);
    for (const auto& t : out) {
        if (t) {
            e.times.push_back(*t);
        } else {
            ++e.censored;
        }
    }
    return e;
}

}  // namespace saclat
