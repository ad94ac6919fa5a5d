#pragma once

// Saccade detection on gaze traces (Engbert & Mergenthaler velocity-space
// elliptic threshold) and primary-saccade latency extraction.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace saclat::gaze {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Vec2&, const Vec2&) = default;
};

inline double distance(const Vec2& a, const Vec2& b) { return std::hypot(a.x - b.x, a.y - b.y); }

/// One sample; time in seconds, position in visual degrees (cyclopean).
struct Sample {
    double t = 0.0;
    double x = 0.0;
    double y = 0.0;
};

inline constexpr std::size_t kMinTraceSamples = 7;

struct GazeTrace {
    std::vector<Sample> samples;

    void validate() const {
        if (samples.size() < kMinTraceSamples) {
            throw std::invalid_argument("gaze trace needs at least 7 samples, got " +
                                        std::to_string(samples.size()));
        }
        for (std::size_t i = 1; i < samples.size(); ++i) {
            if (!(samples[i].t > samples[i - 1].t)) {
                throw std::invalid_argument("gaze trace timestamps must be strictly increasing");
            }
        }
    }
};

struct TrialRecord {
    double stimulus_onset = 0.0;  // seconds, same clock as the trace
    Vec2 origin;
    std::vector<Vec2> targets;
};

struct SaccadeEvent {
    std::size_t onset_index = 0;
    std::size_t offset_index = 0;
    double onset_time = 0.0;
    double offset_time = 0.0;
    Vec2 onset_pos;
    Vec2 offset_pos;
    double peak_velocity = 0.0;  // deg/s
};

/// Per-sample velocity (deg/s). Interior samples use the five-point window
/// (x[n+2] + x[n+1] - x[n-1] - x[n-2]) / (6 dt), with the denominator taken
/// from the actual timestamps; the two samples at each end fall back to
/// forward / backward differences.
inline std::vector<Vec2> velocities(const GazeTrace& trace) {
    trace.validate();
    const auto& s = trace.samples;
    const std::size_t n = s.size();
    std::vector<Vec2> v(n);
    for (std::size_t i = 2; i + 2 < n; ++i) {
        const double dt = s[i + 2].t + s[i + 1].t - s[i - 1].t - s[i - 2].t;
        v[i] = {(s[i + 2].x + s[i + 1].x - s[i - 1].x - s[i - 2].x) / dt,
                (s[i + 2].y + s[i + 1].y - s[i - 1].y - s[i - 2].y) / dt};
    }
    auto diff = [&](std::size_t a, std::size_t b) {
        const double dt = s[b].t - s[a].t;
        return Vec2{(s[b].x - s[a].x) / dt, (s[b].y - s[a].y) / dt};
    };
    v[0] = diff(0, 1);
    v[1] = diff(1, 2);
    v[n - 2] = diff(n - 3, n - 2);
    v[n - 1] = diff(n - 2, n - 1);
    return v;
}

struct DetectionParams {
    double lambda = 6.0;           // threshold multiplier on the median-based sd
    std::size_t min_duration = 3;  // samples
    std::size_t merge_gap = 2;     // events whose onsets follow the previous offset by <= this many samples merge
};

namespace detail {

inline double median(std::vector<double> xs) {
    const std::size_t mid = xs.size() / 2;
    std::nth_element(xs.begin(), xs.begin() + static_cast<std::ptrdiff_t>(mid), xs.end());
    double m = xs[mid];
    if (xs.size() % 2 == 0) {
        m = 0.5 * (m + *std::max_element(xs.begin(), xs.begin() + static_cast<std::ptrdiff_t>(mid)));
    }
    return m;
}

/// sqrt(median(v^2) - median(v)^2)
inline double robust_sd(const std::vector<double>& v) {
    std::vector<double> sq(v.size());
    std::transform(v.begin(), v.end(), sq.begin(), [](double a) { return a * a; });
    const double m = median(v);
    return std::sqrt(std::max(0.0, median(std::move(sq)) - m * m));
}

inline double axis_term(double v, double eta) {
    if (eta > 0.0) {
        return (v / eta) * (v / eta);
    }
    return v == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
}

}  // namespace detail

inline std::vector<SaccadeEvent> detect_saccades(const GazeTrace& trace,
                                                 const DetectionParams& params = {}) {
    const auto v = velocities(trace);
    std::vector<double> vx(v.size());
    std::vector<double> vy(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        vx[i] = v[i].x;
        vy[i] = v[i].y;
    }
    const double eta_x = params.lambda * detail::robust_sd(vx);
    const double eta_y = params.lambda * detail::robust_sd(vy);
    if (eta_x == 0.0 && eta_y == 0.0) {
        return {};
    }

    struct Run {
        std::size_t begin;
        std::size_t end;  // inclusive
    };
    std::vector<Run> runs;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const bool above = detail::axis_term(v[i].x, eta_x) + detail::axis_term(v[i].y, eta_y) > 1.0;
        if (!above) {
            continue;
        }
        if (!runs.empty() && i - runs.back().end <= params.merge_gap) {
            runs.back().end = i;
        } else {
            runs.push_back({i, i});
        }
    }

    const auto& s = trace.samples;
    std::vector<SaccadeEvent> events;
    for (const auto& r : runs) {
        if (r.end - r.begin + 1 < params.min_duration) {
            continue;
        }
        SaccadeEvent e;
        e.onset_index = r.begin;
        e.offset_index = r.end;
        e.onset_time = s[r.begin].t;
        e.offset_time = s[r.end].t;
        e.onset_pos = {s[r.begin].x, s[r.begin].y};
        e.offset_pos = {s[r.end].x, s[r.end].y};
        for (std::size_t i = r.begin; i <= r.end; ++i) {
            e.peak_velocity = std::max(e.peak_velocity, std::hypot(v[i].x, v[i].y));
        }
        events.push_back(e);
    }
    return events;
}

enum class LatencyStatus { ok, no_saccade, anticipatory };

inline const char* to_string(LatencyStatus s) {
    switch (s) {
        case LatencyStatus::ok:
            return "ok";
        case LatencyStatus::no_saccade:
            return "no_saccade";
        case LatencyStatus::anticipatory:
            return "anticipatory";
    }
    return "unknown";
}

struct LatencyResult {
    LatencyStatus status = LatencyStatus::no_saccade;
    std::optional<double> latency;  // seconds, set when status == ok
    std::optional<SaccadeEvent> saccade;
};

/// The primary saccade starts within `tolerance` degrees of the trial origin
/// and lands within `tolerance` of one of its targets; its onset relative to
/// stimulus onset is the latency. A primary saccade that starts before the
/// stimulus is reported as anticipatory and carries no latency.
inline LatencyResult primary_saccade_latency(std::span<const SaccadeEvent> events,
                                             const TrialRecord& trial, double tolerance = 3.0) {
    for (const auto& e : events) {
        if (distance(e.onset_pos, trial.origin) > tolerance) {
            continue;
        }
        const bool lands = std::any_of(trial.targets.begin(), trial.targets.end(),
                                       [&](const Vec2& t) { return distance(e.offset_pos, t) <= tolerance; });
        if (!lands) {
            continue;
        }
        const double latency = e.onset_time - trial.stimulus_onset;
        if (latency < 0.0) {
            return {LatencyStatus::anticipatory, std::nullopt, e};
        }
        return {LatencyStatus::ok, latency, e};
    }
    return {};
}

inline LatencyResult primary_saccade_latency(const GazeTrace& trace, const TrialRecord& trial,
                                             double tolerance = 3.0,
                                             const DetectionParams& params = {}) {
    if (trace.samples.size() < kMinTraceSamples) {
        return {};
    }
    const auto events = detect_saccades(trace, params);
    return primary_saccade_latency(events, trial, tolerance);
}

}  // namespace saclat::gaze
