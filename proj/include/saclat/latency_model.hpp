#pragma once

// Saccade latency model T(D, c, f, e) ~ IG(alpha(D), nu(c, f, e)): threshold
// estimation from moments, per-subject normalization, task calibration and
// prediction.

#include <cmath>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "saclat/rbf.hpp"
#include "saclat/wald.hpp"

namespace saclat {

struct TaskDescription {
    std::string id;
    double alpha = 1.0;
};

struct LatencyRecord {
    std::string subject_id;
    std::string block_id;
    std::string condition_id;
    StimulusFeatures features;
    double latency = 0.0;
};

struct LatencyDataset {
    std::vector<LatencyRecord> records;

    void validate() const {
        for (const auto& r : records) {
            if (r.subject_id.empty() || r.condition_id.empty()) {
                throw std::invalid_argument("LatencyDataset: record without subject or condition");
            }
            if (!(r.latency > 0.0) || !std::isfinite(r.latency)) {
                throw std::invalid_argument("LatencyDataset: latencies must be positive");
            }
        }
    }
};

/// Raised when the rate network predicts nu <= 0 for a stimulus, i.e. the
/// stimulus sits at or below detectability and the latency diverges.
class OutOfDomainPrediction : public std::domain_error {
public:
    OutOfDomainPrediction(double nu, const StimulusFeatures& x)
        : std::domain_error("predicted rate nu = " + std::to_string(nu) +
                            " <= 0 at (c=" + std::to_string(x.contrast) +
                            ", f=" + std::to_string(x.frequency) +
                            ", e=" + std::to_string(x.eccentricity) + ")"),
          nu_(nu) {}

    double nu() const { return nu_; }

private:
    double nu_;
};

namespace latency {

struct Moments {
    double mean = 0.0;
    double variance = 0.0;  // unbiased
};

inline Moments sample_moments(std::span<const double> xs) {
    if (xs.size() < 2) {
        throw std::invalid_argument("sample_moments: need at least two samples");
    }
    double m = 0.0;
    for (double x : xs) {
        m += x;
    }
    m /= static_cast<double>(xs.size());
    double ss = 0.0;
    for (double x : xs) {
        ss += (x - m) * (x - m);
    }
    return {m, ss / static_cast<double>(xs.size() - 1)};
}

/// alpha = sqrt(E^3 / V) from analytic or sample moments.
inline double alpha_from_moments(double mean, double variance) {
    if (!(variance > 0.0)) {
        throw std::domain_error("estimate_alpha: zero variance");
    }
    if (!(mean > 0.0)) {
        throw std::domain_error("estimate_alpha: mean must be positive");
    }
    return std::sqrt(mean * mean * mean / variance);
}

/// Threshold from a latency sample. Scaling the sample by k scales the result
/// by sqrt(k): always estimate on normalized latencies.
inline double estimate_alpha(std::span<const double> latencies) {
    const Moments mo = sample_moments(latencies);
    return alpha_from_moments(mo.mean, mo.variance);
}

/// Per-subject factor 1 / mean(pedestal latency).
inline std::map<std::string, double> subject_scales(const LatencyDataset& data,
                                                    const std::string& pedestal) {
    std::map<std::string, std::pair<double, std::size_t>> sums;
    for (const auto& r : data.records) {
        sums.try_emplace(r.subject_id, 0.0, 0);
        if (r.condition_id == pedestal) {
            auto& s = sums[r.subject_id];
            s.first += r.latency;
            ++s.second;
        }
    }
    std::map<std::string, double> scales;
    for (const auto& [subject, s] : sums) {
        if (s.second == 0) {
            throw std::invalid_argument("normalize_dataset: subject '" + subject +
                                        "' has no trials in pedestal condition '" + pedestal +
                                        "'");
        }
        scales[subject] = static_cast<double>(s.second) / s.first;
    }
    return scales;
}

/// Scales every subject's latencies so that their pedestal-condition mean is 1.
inline LatencyDataset normalize_dataset(const LatencyDataset& data, const std::string& pedestal) {
    data.validate();
    const auto scales = subject_scales(data, pedestal);
    LatencyDataset out = data;
    for (auto& r : out.records) {
        r.latency *= scales.at(r.subject_id);
    }
    return out;
}

struct ConditionSummary {
    std::string condition_id;
    StimulusFeatures features;
    std::vector<double> latencies;

    double mean() const {
        double s = 0.0;
        for (double x : latencies) {
            s += x;
        }
        return s / static_cast<double>(latencies.size());
    }
};

/// Records grouped by condition id (sorted by id).
inline std::vector<ConditionSummary> group_by_condition(const LatencyDataset& data) {
    std::map<std::string, ConditionSummary> groups;
    for (const auto& r : data.records) {
        auto [it, inserted] = groups.try_emplace(r.condition_id);
        if (inserted) {
            it->second.condition_id = r.condition_id;
            it->second.features = r.features;
        } else if (!(it->second.features == r.features)) {
            throw std::invalid_argument("condition '" + r.condition_id +
                                        "' appears with different stimulus features");
        }
        it->second.latencies.push_back(r.latency);
    }
    std::vector<ConditionSummary> out;
    out.reserve(groups.size());
    for (auto& [id, g] : groups) {
        out.push_back(std::move(g));
    }
    return out;
}

/// One rate label per condition: 1 / mean normalized latency.
inline std::vector<LabeledSample> condition_labels(const LatencyDataset& normalized) {
    std::vector<LabeledSample> out;
    for (const auto& g : group_by_condition(normalized)) {
        out.push_back({g.features, rbf::nu_label_from_mean(g.mean())});
    }
    return out;
}

struct Calibration {
    TaskDescription task;
    double nu_rescale = 1.0;
};

/// Threshold from the sample, and a factor on the network output such that the
/// model mean alpha / (k nu(x)) equals the sample mean at the sample's condition.
inline Calibration calibrate(std::span<const double> sample, const StimulusFeatures& condition,
                             const RBFNetwork& net, std::string task_id = "task") {
    const Moments mo = sample_moments(sample);
    const double alpha = alpha_from_moments(mo.mean, mo.variance);
    const double nu = rbf::eval(net, condition);
    if (!(nu > 0.0)) {
        throw OutOfDomainPrediction(nu, condition);
    }
    return {{std::move(task_id), alpha}, alpha / (mo.mean * nu)};
}

/// IG(alpha(D), k nu(c, f, e)).
inline IGParams predict(const TaskDescription& task, const StimulusFeatures& x,
                        const RBFNetwork& net, double nu_rescale = 1.0) {
    x.validate();
    const double nu = nu_rescale * rbf::eval(net, x);
    if (!(nu > 0.0)) {
        throw OutOfDomainPrediction(nu, x);
    }
    return {task.alpha, nu};
}

}  // namespace latency

/// A trained rate network plus an optional task calibration.
struct RateModel {
    RBFNetwork network;
    std::optional<latency::Calibration> calibration;

    /// Without calibration the model runs in the training normalization,
    /// alpha = 1 and mean latency 1/nu(x).
    IGParams params(const StimulusFeatures& x) const {
        if (calibration) {
            return latency::predict(calibration->task, x, network, calibration->nu_rescale);
        }
        return latency::predict(TaskDescription{"normalized", 1.0}, x, network);
    }

    double mean_latency(const StimulusFeatures& x) const { return wald::mean(params(x)); }
};

}  // namespace saclat
