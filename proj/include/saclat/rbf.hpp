#pragma once

// Evidence-integration rate nu(c, f, e) as a Gaussian radial-basis-function
// network, trained jointly over weights, centers and widths with Adam.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace saclat {

using Point3 = std::array<double, 3>;

/// Weber contrast, spatial frequency (cycles/deg) and eccentricity (deg).
struct StimulusFeatures {
    double contrast = 0.0;
    double frequency = 1.0;
    double eccentricity = 0.0;

    void validate() const {
        if (!std::isfinite(contrast) || !std::isfinite(frequency) ||
            !std::isfinite(eccentricity)) {
            throw std::invalid_argument("StimulusFeatures: non-finite value");
        }
        if (contrast < 0.0 || !(frequency > 0.0) || eccentricity < 0.0) {
            throw std::invalid_argument(
                "StimulusFeatures: need contrast >= 0, frequency > 0, eccentricity >= 0");
        }
    }

    friend bool operator==(const StimulusFeatures&, const StimulusFeatures&) = default;
};

/// Default input scaling: spans of the pilot condition grid.
inline constexpr Point3 kDefaultFeatureScales{1.0, 4.0, 20.0};

struct RBFNetwork {
    Point3 feature_scales = kDefaultFeatureScales;
    std::vector<Point3> centers;  // in scaled feature space
    std::vector<double> widths;
    std::vector<double> weights;

    std::size_t size() const { return centers.size(); }

    void validate() const {
        if (centers.empty()) {
            throw std::invalid_argument("RBFNetwork: needs at least one center");
        }
        if (widths.size() != centers.size() || weights.size() != centers.size()) {
            throw std::invalid_argument("RBFNetwork: centers/widths/weights size mismatch");
        }
        for (double s : feature_scales) {
            if (!(s > 0.0) || !std::isfinite(s)) {
                throw std::invalid_argument("RBFNetwork: feature scales must be positive");
            }
        }
        for (double w : widths) {
            if (!(w > 0.0) || !std::isfinite(w)) {
                throw std::invalid_argument("RBFNetwork: widths must be positive");
            }
        }
    }

    Point3 scale(const StimulusFeatures& x) const {
        return {x.contrast / feature_scales[0], x.frequency / feature_scales[1],
                x.eccentricity / feature_scales[2]};
    }

    friend bool operator==(const RBFNetwork&, const RBFNetwork&) = default;
};

namespace rbf {

inline double squared_distance(const Point3& a, const Point3& b) {
    double d = 0.0;
    for (int k = 0; k < 3; ++k) {
        d += (a[k] - b[k]) * (a[k] - b[k]);
    }
    return d;
}

/// Gaussian basis rho(r, sigma) = exp(-r^2 / (2 sigma^2)), taking r^2.
inline double basis(double r2, double sigma) { return std::exp(-r2 / (2.0 * sigma * sigma)); }

/// nu for an input already in scaled feature space.
inline double eval_scaled(const RBFNetwork& net, const Point3& xs) {
    double nu = 0.0;
    for (std::size_t i = 0; i < net.size(); ++i) {
        nu += net.weights[i] * basis(squared_distance(xs, net.centers[i]), net.widths[i]);
    }
    return nu;
}

inline double eval(const RBFNetwork& net, const StimulusFeatures& x) {
    return eval_scaled(net, net.scale(x));
}

/// d(nu)/d(parameter) times residual, i.e. the gradient of residual^2/2 when
/// residual = eval - label.
struct Gradient {
    std::vector<double> weights;
    std::vector<Point3> centers;
    std::vector<double> widths;
};

inline Gradient grad_scaled(const RBFNetwork& net, const Point3& xs, double residual) {
    const std::size_t n = net.size();
    Gradient g{std::vector<double>(n), std::vector<Point3>(n), std::vector<double>(n)};
    for (std::size_t i = 0; i < n; ++i) {
        const double sigma = net.widths[i];
        const double r2 = squared_distance(xs, net.centers[i]);
        const double phi = basis(r2, sigma);
        const double common = residual * net.weights[i] * phi;
        g.weights[i] = residual * phi;
        for (int k = 0; k < 3; ++k) {
            g.centers[i][k] = common * (xs[k] - net.centers[i][k]) / (sigma * sigma);
        }
        g.widths[i] = common * r2 / (sigma * sigma * sigma);
    }
    return g;
}

inline Gradient grad(const RBFNetwork& net, const StimulusFeatures& x, double residual) {
    return grad_scaled(net, net.scale(x), residual);
}

}  // namespace rbf

struct LabeledSample {
    StimulusFeatures x;
    double nu = 0.0;
};

struct TrainConfig {
    double learning_rate = 0.1;
    std::size_t epochs = 2000;
    std::size_t n_centers = 20;
    std::uint64_t seed = 0;
    Point3 feature_scales = kDefaultFeatureScales;

    void validate() const {
        if (!(learning_rate > 0.0)) {
            throw std::invalid_argument("TrainConfig: learning_rate must be positive");
        }
        if (epochs < 1 || n_centers < 1) {
            throw std::invalid_argument("TrainConfig: epochs and n_centers must be >= 1");
        }
    }
};

struct TrainResult {
    RBFNetwork network;
    double initial_loss = 0.0;
    double final_loss = 0.0;
};

namespace rbf {

inline double mse(const RBFNetwork& net, std::span<const LabeledSample> data) {
    double s = 0.0;
    for (const auto& d : data) {
        const double r = eval(net, d.x) - d.nu;
        s += r * r;
    }
    return s / static_cast<double>(data.size());
}

/// Rate label from a condition's mean (normalized) latency; the
/// proportionality constant between nu and 1/E[T] is fixed to 1.
inline double nu_label_from_mean(double mean_latency) {
    if (!(mean_latency > 0.0) || !std::isfinite(mean_latency)) {
        throw std::domain_error("nu_label_from_mean: mean latency must be positive");
    }
    return 1.0 / mean_latency;
}

namespace detail {

inline RBFNetwork initial_network(std::span<const LabeledSample> data, const TrainConfig& cfg,
                                  std::mt19937_64& rng) {
    RBFNetwork net;
    net.feature_scales = cfg.feature_scales;
    std::vector<std::size_t> order(data.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::shuffle(order.begin(), order.end(), rng);
    std::normal_distribution<double> jitter(0.0, 1e-3);
    for (std::size_t i = 0; i < cfg.n_centers; ++i) {
        Point3 c = net.scale(data[order[i % order.size()]].x);
        if (i >= order.size()) {
            // More centers than inputs: separate the repeats or they stay tied forever.
            for (double& v : c) {
                v += jitter(rng);
            }
        }
        net.centers.push_back(c);
    }
    double nn_sum = 0.0;
    for (std::size_t i = 0; i < net.size(); ++i) {
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < net.size(); ++j) {
            if (j != i) {
                best = std::min(best, std::sqrt(squared_distance(net.centers[i], net.centers[j])));
            }
        }
        nn_sum += std::isfinite(best) ? best : 0.0;
    }
    double width = nn_sum / static_cast<double>(net.size());
    if (!(width > 0.0)) {
        width = 1.0;
    }
    double label_mean = 0.0;
    for (const auto& d : data) {
        label_mean += d.nu;
    }
    label_mean /= static_cast<double>(data.size());
    net.widths.assign(net.size(), width);
    net.weights.assign(net.size(), label_mean / static_cast<double>(net.size()));
    return net;
}

}  // namespace detail

/// Full-batch Adam on mean squared error. Widths are optimized as log(sigma).
inline TrainResult train(std::span<const LabeledSample> data, const TrainConfig& cfg) {
    cfg.validate();
    if (data.empty()) {
        throw std::invalid_argument("rbf::train: empty training data");
    }
    for (const auto& d : data) {
        d.x.validate();
        if (!(d.nu > 0.0) || !std::isfinite(d.nu)) {
            throw std::invalid_argument("rbf::train: labels must be positive");
        }
    }
    std::mt19937_64 rng(cfg.seed);
    RBFNetwork net = detail::initial_network(data, cfg, rng);
    const std::size_t n = net.size();

    // Flat parameter layout: [weights | centers (3n) | log widths].
    const std::size_t dim = 5 * n;
    std::vector<double> m(dim, 0.0);
    std::vector<double> v(dim, 0.0);
    std::vector<double> g(dim, 0.0);
    std::vector<Point3> scaled;
    scaled.reserve(data.size());
    for (const auto& d : data) {
        scaled.push_back(net.scale(d.x));
    }

    constexpr double beta1 = 0.9;
    constexpr double beta2 = 0.999;
    constexpr double eps = 1e-8;
    const double inv_count = 1.0 / static_cast<double>(data.size());

    TrainResult result;
    result.initial_loss = mse(net, data);
    double b1t = 1.0;
    double b2t = 1.0;
    for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
        std::fill(g.begin(), g.end(), 0.0);
        for (std::size_t j = 0; j < data.size(); ++j) {
            const double r = eval_scaled(net, scaled[j]) - data[j].nu;
            const Gradient gj = grad_scaled(net, scaled[j], 2.0 * r * inv_count);
            for (std::size_t i = 0; i < n; ++i) {
                g[i] += gj.weights[i];
                for (int k = 0; k < 3; ++k) {
                    g[n + 3 * i + k] += gj.centers[i][k];
                }
                // chain rule through sigma = exp(log sigma)
                g[4 * n + i] += gj.widths[i] * net.widths[i];
            }
        }
        b1t *= beta1;
        b2t *= beta2;
        std::vector<double> step(dim);
        for (std::size_t k = 0; k < dim; ++k) {
            m[k] = beta1 * m[k] + (1.0 - beta1) * g[k];
            v[k] = beta2 * v[k] + (1.0 - beta2) * g[k] * g[k];
            const double mhat = m[k] / (1.0 - b1t);
            const double vhat = v[k] / (1.0 - b2t);
            step[k] = cfg.learning_rate * mhat / (std::sqrt(vhat) + eps);
        }
        for (std::size_t i = 0; i < n; ++i) {
            net.weights[i] -= step[i];
            for (int k = 0; k < 3; ++k) {
                net.centers[i][k] -= step[n + 3 * i + k];
            }
            net.widths[i] = std::exp(std::log(net.widths[i]) - step[4 * n + i]);
        }
        for (std::size_t i = 0; i < n; ++i) {
            const bool finite = std::isfinite(net.weights[i]) && std::isfinite(net.widths[i]) &&
                                net.widths[i] > 0.0 && std::isfinite(net.centers[i][0]) &&
                                std::isfinite(net.centers[i][1]) &&
                                std::isfinite(net.centers[i][2]);
            if (!finite) {
                throw std::runtime_error("rbf::train: non-finite parameter at epoch " +
                                         std::to_string(epoch));
            }
        }
    }
    result.final_loss = mse(net, data);
    result.network = std::move(net);
    return result;
}

}  // namespace rbf
}  // namespace saclat
