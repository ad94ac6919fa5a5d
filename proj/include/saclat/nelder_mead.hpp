#pragma once

// Derivative-free Nelder-Mead simplex minimization.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace saclat::optimize {

struct NelderMeadOptions {
    std::size_t max_iterations = 2000;
    double f_tolerance = 1e-10;  // spread of simplex values, relative + absolute
    double x_tolerance = 1e-8;   // simplex diameter
    double initial_step = 0.1;
};

struct NelderMeadResult {
    std::vector<double> x;
    double value = 0.0;
    std::size_t iterations = 0;
    bool converged = false;
};

template <class F>
NelderMeadResult nelder_mead(F&& f, std::vector<double> x0, const NelderMeadOptions& opt = {}) {
    const std::size_t n = x0.size();
    if (n == 0) {
        throw std::invalid_argument("nelder_mead: empty starting point");
    }
    std::vector<std::vector<double>> simplex(n + 1, x0);
    for (std::size_t i = 0; i < n; ++i) {
        simplex[i + 1][i] += opt.initial_step;
    }
    std::vector<double> values(n + 1);
    for (std::size_t i = 0; i <= n; ++i) {
        values[i] = f(simplex[i]);
    }
    std::vector<std::size_t> order(n + 1);
    auto point = [&](const std::vector<double>& from, const std::vector<double>& to, double t) {
        std::vector<double> p(n);
        for (std::size_t k = 0; k < n; ++k) {
            p[k] = from[k] + t * (to[k] - from[k]);
        }
        return p;
    };

    NelderMeadResult res;
    for (res.iterations = 0; res.iterations < opt.max_iterations; ++res.iterations) {
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
        const std::size_t best = order.front();
        const std::size_t worst = order.back();
        const std::size_t second = order[n - 1];

        double diameter = 0.0;
        for (std::size_t i = 0; i <= n; ++i) {
            for (std::size_t k = 0; k < n; ++k) {
                diameter = std::max(diameter, std::abs(simplex[i][k] - simplex[best][k]));
            }
        }
        const double spread = std::abs(values[worst] - values[best]);
        if (spread <= opt.f_tolerance * (1.0 + std::abs(values[best])) &&
            diameter <= opt.x_tolerance) {
            res.converged = true;
            break;
        }

        std::vector<double> centroid(n, 0.0);
        for (std::size_t i = 0; i <= n; ++i) {
            if (i == worst) {
                continue;
            }
            for (std::size_t k = 0; k < n; ++k) {
                centroid[k] += simplex[i][k] / static_cast<double>(n);
            }
        }

        auto reflected = point(centroid, simplex[worst], -1.0);
        const double fr = f(reflected);
        if (fr < values[best]) {
            auto expanded = point(centroid, simplex[worst], -2.0);
            const double fe = f(expanded);
            if (fe < fr) {
                simplex[worst] = std::move(expanded);
                values[worst] = fe;
            } else {
                simplex[worst] = std::move(reflected);
                values[worst] = fr;
            }
            continue;
        }
        if (fr < values[second]) {
            simplex[worst] = std::move(reflected);
            values[worst] = fr;
            continue;
        }
        const bool outside = fr < values[worst];
        auto contracted = outside ? point(centroid, reflected, 0.5)
                                  : point(centroid, simplex[worst], 0.5);
        const double fc = f(contracted);
        if (fc < (outside ? fr : values[worst])) {
            simplex[worst] = std::move(contracted);
            values[worst] = fc;
            continue;
        }
        for (std::size_t i = 0; i <= n; ++i) {
            if (i == best) {
                continue;
            }
            simplex[i] = point(simplex[best], simplex[i], 0.5);
            values[i] = f(simplex[i]);
        }
    }
    const auto best = static_cast<std::size_t>(
        std::min_element(values.begin(), values.end()) - values.begin());
    res.x = simplex[best];
    res.value = values[best];
    return res;
}

}  // namespace saclat::optimize
