#pragma once

// Per-team latency analysis of on-screen targets and its field-of-view sweep.
// Gaze is assumed to rest at the screen center; each target contributes the
// model's mean latency for its (contrast, retinal frequency, eccentricity).

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "saclat/geometry.hpp"
#include "saclat/latency_model.hpp"
#include "saclat/stats.hpp"
#include "saclat/stimulus_features.hpp"

namespace saclat::fairness {

struct BBox {
    double x = 0.0;  // left, px
    double y = 0.0;  // top, px
    double w = 0.0;
    double h = 0.0;

    friend bool operator==(const BBox&, const BBox&) = default;
};

/// One detected target. The spatial frequency is kept in display units
/// (cycles/cm) so it can be re-projected for any viewing distance.
struct TargetObservation {
    std::string frame_id;
    std::string team;
    BBox bbox;
    double target_luminance = 0.0;
    double background_luminance = 0.0;
    double frequency_cpcm = 0.0;
};

inline void validate(const TargetObservation& t, const DisplayConfig& cfg) {
    const auto where = "target in frame '" + t.frame_id + "'";
    if (t.team.empty()) {
        throw std::invalid_argument(where + ": missing team");
    }
    if (!(t.bbox.w > 0.0) || !(t.bbox.h > 0.0) || t.bbox.x < 0.0 || t.bbox.y < 0.0 ||
        t.bbox.x + t.bbox.w > cfg.width_px() || t.bbox.y + t.bbox.h > cfg.height_px()) {
        throw std::invalid_argument(where + ": bounding box outside the frame");
    }
    if (!(t.target_luminance >= 0.0 && t.target_luminance <= 1.0) ||
        !(t.background_luminance > 0.0 && t.background_luminance <= 1.0)) {
        throw std::invalid_argument(where + ": luminances must lie in [0, 1], background > 0");
    }
    if (!(t.frequency_cpcm > 0.0) || !std::isfinite(t.frequency_cpcm)) {
        throw std::invalid_argument(where + ": frequency must be positive");
    }
}

/// Radial eccentricity of the bounding-box center seen from the screen center.
inline double eccentricity(const BBox& b, const DisplayConfig& cfg) {
    const double dx = cfg.offset_x_cm(b.x + b.w / 2.0);
    const double dy = cfg.offset_y_cm(b.y + b.h / 2.0);
    return screen_pos_to_eccentricity(std::hypot(dx, dy), cfg);
}

inline StimulusFeatures features(const TargetObservation& t, const DisplayConfig& cfg) {
    const double ecc = eccentricity(t.bbox, cfg);
    return {weber_contrast(t.target_luminance, t.background_luminance),
            display_to_retinal_frequency(t.frequency_cpcm, ecc, cfg), ecc};
}

/// Canonical ordering so that reductions do not depend on input order.
inline std::vector<TargetObservation> canonical(std::span<const TargetObservation> targets) {
    std::vector<TargetObservation> out(targets.begin(), targets.end());
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        return std::tie(a.frame_id, a.team, a.bbox.x, a.bbox.y, a.bbox.w, a.bbox.h,
                        a.target_luminance, a.background_luminance, a.frequency_cpcm) <
               std::tie(b.frame_id, b.team, b.bbox.x, b.bbox.y, b.bbox.w, b.bbox.h,
                        b.target_luminance, b.background_luminance, b.frequency_cpcm);
    });
    return out;
}

struct TeamSummary {
    std::string team;
    std::size_t targets = 0;
    std::size_t frames = 0;
    double mean = 0.0;  // normalized latency
    double se = 0.0;
    double mean_ms = 0.0;
    double se_ms = 0.0;
};

struct FrameRow {
    std::string frame_id;
    std::string team;
    std::size_t targets = 0;
    double mean = 0.0;
    double mean_ms = 0.0;
};

struct FairnessReport {
    double anchor_ms = 282.0;
    std::vector<TeamSummary> teams;  // sorted by label
    std::vector<FrameRow> frames;    // sorted by (frame, team)
    std::optional<stats::AnovaResult> anova;
    std::string anova_note;  // why the ANOVA was skipped, if it was
    double percent_gap = 0.0;  // (slowest / fastest - 1) * 100
    std::string fastest;
    std::string slowest;
    std::size_t skipped_frames = 0;
};

struct FairnessOptions {
    double anchor_ms = 282.0;
    std::vector<std::string> teams;  // when non-empty, the only allowed labels
    std::size_t skipped_frames = 0;  // frames that carried no targets
};

namespace detail {

inline void check_teams(std::span<const TargetObservation> targets,
                        const std::vector<std::string>& allowed) {
    if (targets.empty()) {
        throw std::invalid_argument("no targets");
    }
    std::set<std::string> seen;
    for (const auto& t : targets) {
        if (!allowed.empty() && std::find(allowed.begin(), allowed.end(), t.team) == allowed.end()) {
            throw std::invalid_argument("unknown team label '" + t.team + "'");
        }
        seen.insert(t.team);
    }
    if (seen.size() < 2) {
        throw std::invalid_argument("need targets from at least two teams");
    }
}

inline double mean_of(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) {
        s += x;
    }
    return s / static_cast<double>(v.size());
}

inline double se_of(const std::vector<double>& v, double m) {
    if (v.size() < 2) {
        return 0.0;
    }
    double ss = 0.0;
    for (double x : v) {
        ss += (x - m) * (x - m);
    }
    return std::sqrt(ss / static_cast<double>(v.size() - 1) / static_cast<double>(v.size()));
}

}  // namespace detail

inline FairnessReport analyze(std::span<const TargetObservation> input, const RateModel& model,
                              const DisplayConfig& cfg, const FairnessOptions& opt = {}) {
    if (!(opt.anchor_ms > 0.0)) {
        throw std::invalid_argument("ms anchor must be positive");
    }
    detail::check_teams(input, opt.teams);
    const auto targets = canonical(input);
    for (const auto& t : targets) {
        validate(t, cfg);
    }

    std::map<std::string, std::vector<double>> per_team;
    std::map<std::pair<std::string, std::string>, std::vector<double>> per_frame;
    for (const auto& t : targets) {
        const double latency = model.mean_latency(features(t, cfg));
        per_team[t.team].push_back(latency);
        per_frame[{t.frame_id, t.team}].push_back(latency);
    }

    FairnessReport r;
    r.anchor_ms = opt.anchor_ms;
    r.skipped_frames = opt.skipped_frames;
    std::map<std::string, std::vector<double>> frame_means;
    for (const auto& [key, values] : per_frame) {
        const double m = detail::mean_of(values);
        r.frames.push_back({key.first, key.second, values.size(), m, m * opt.anchor_ms});
        frame_means[key.second].push_back(m);
    }
    for (const auto& [team, values] : per_team) {
        TeamSummary s;
        s.team = team;
        s.targets = values.size();
        s.frames = frame_means[team].size();
        s.mean = detail::mean_of(values);
        s.se = detail::se_of(values, s.mean);
        s.mean_ms = s.mean * opt.anchor_ms;
        s.se_ms = s.se * opt.anchor_ms;
        r.teams.push_back(s);
    }

    const auto [lo, hi] = std::minmax_element(
        r.teams.begin(), r.teams.end(), [](const auto& a, const auto& b) { return a.mean < b.mean; });
    r.fastest = lo->team;
    r.slowest = hi->team;
    r.percent_gap = (hi->mean / lo->mean - 1.0) * 100.0;

    std::vector<std::vector<double>> groups;
    for (const auto& [team, means] : frame_means) {
        groups.push_back(means);
    }
    try {
        r.anova = stats::one_way_anova(groups);
    } catch (const std::invalid_argument& e) {
        r.anova_note = e.what();
    }
    return r;
}

// ---------------------------------------------------------------------------
// Field-of-view sweep

struct SweepRow {
    double fov_deg = 0.0;
    double distance_cm = 0.0;
    double diopters = 0.0;
    std::vector<double> team_means;  // aligned with SweepResult::teams
};

struct TeamOptimum {
    std::string team;
    double fov_deg = 0.0;
    double diopters = 0.0;
    double mean = 0.0;
};

struct Crossing {
    double fov_deg = 0.0;
    double diopters = 0.0;
    double mean = 0.0;
};

struct SweepResult {
    std::vector<std::string> teams;  // sorted
    std::vector<SweepRow> rows;
    std::vector<TeamOptimum> optima;
    std::optional<Crossing> crossing;  // first sign change of team[0] - team[1]
    bool degenerate = false;           // the two curves coincide on the grid
};

struct SweepOptions {
    double fov_min = 20.0;
    double fov_max = 120.0;
    std::size_t steps = 101;
};

/// Mean normalized latency per team at one field of view.
inline std::vector<double> team_means_at(std::span<const TargetObservation> targets,
                                         const std::vector<std::string>& teams,
                                         const RateModel& model, const DisplayConfig& cfg) {
    std::vector<double> sum(teams.size(), 0.0);
    std::vector<std::size_t> count(teams.size(), 0);
    for (const auto& t : targets) {
        const auto k = static_cast<std::size_t>(
            std::lower_bound(teams.begin(), teams.end(), t.team) - teams.begin());
        sum[k] += model.mean_latency(features(t, cfg));
        ++count[k];
    }
    for (std::size_t k = 0; k < teams.size(); ++k) {
        sum[k] /= static_cast<double>(count[k]);
    }
    return sum;
}

/// Re-projects every target for each field of view on [fov_min, fov_max]
/// (steps points, inclusive) by changing the eye-display distance of the
/// physical screen in `cfg`.
inline SweepResult fov_sweep(std::span<const TargetObservation> input, const RateModel& model,
                             const DisplayConfig& cfg, const SweepOptions& opt = {}) {
    if (input.empty()) {
        throw std::invalid_argument("fov sweep: empty targets");
    }
    if (!(opt.fov_min > 0.0) || !(opt.fov_max < 180.0) || !(opt.fov_min < opt.fov_max)) {
        throw std::invalid_argument("fov sweep: range must satisfy 0 < min < max < 180");
    }
    if (opt.steps < 2) {
        throw std::invalid_argument("fov sweep: need at least two steps");
    }
    const auto targets = canonical(input);
    for (const auto& t : targets) {
        validate(t, cfg);
    }
    SweepResult res;
    for (const auto& t : targets) {
        res.teams.push_back(t.team);
    }
    std::sort(res.teams.begin(), res.teams.end());
    res.teams.erase(std::unique(res.teams.begin(), res.teams.end()), res.teams.end());

    auto at = [&](double fov) { return team_means_at(targets, res.teams, model, cfg.with_fov(fov)); };
    const double step = (opt.fov_max - opt.fov_min) / static_cast<double>(opt.steps - 1);
    for (std::size_t i = 0; i < opt.steps; ++i) {
        const double fov = i + 1 == opt.steps ? opt.fov_max : opt.fov_min + step * static_cast<double>(i);
        const auto c = cfg.with_fov(fov);
        res.rows.push_back({fov, c.distance_cm(), c.diopters(), at(fov)});
    }

    for (std::size_t k = 0; k < res.teams.size(); ++k) {
        const auto best = std::min_element(res.rows.begin(), res.rows.end(), [k](const auto& a, const auto& b) {
            return a.team_means[k] < b.team_means[k];
        });
        res.optima.push_back({res.teams[k], best->fov_deg, best->diopters, best->team_means[k]});
    }

    if (res.teams.size() == 2) {
        auto diff = [](const std::vector<double>& m) { return m[0] - m[1]; };
        double scale = 0.0;
        bool all_zero = true;
        for (const auto& row : res.rows) {
            scale = std::max(scale, std::abs(row.team_means[0]));
        }
        const double tol = 1e-12 * std::max(scale, 1.0);
        for (const auto& row : res.rows) {
            all_zero = all_zero && std::abs(diff(row.team_means)) <= tol;
        }
        res.degenerate = all_zero;
        for (std::size_t i = 0; !all_zero && i + 1 < res.rows.size(); ++i) {
            const double g0 = diff(res.rows[i].team_means);
            const double g1 = diff(res.rows[i + 1].team_means);
            if (std::abs(g0) <= tol) {
                res.crossing = Crossing{res.rows[i].fov_deg, res.rows[i].diopters,
                                        res.rows[i].team_means[0]};
                break;
            }
            if ((g0 < 0.0) != (g1 < 0.0) && std::abs(g1) > tol) {
                double a = res.rows[i].fov_deg;
                double b = res.rows[i + 1].fov_deg;
                double ga = g0;
                for (int it = 0; it < 60 && b - a > 1e-10; ++it) {
                    const double m = 0.5 * (a + b);
                    const double gm = diff(at(m));
                    if ((gm < 0.0) == (ga < 0.0)) {
                        a = m;
                        ga = gm;
                    } else {
                        b = m;
                    }
                }
                const double fov = 0.5 * (a + b);
                res.crossing = Crossing{fov, cfg.with_fov(fov).diopters(), at(fov)[0]};
                break;
            }
        }
        const auto& last = res.rows.back();
        if (!all_zero && !res.crossing && std::abs(diff(last.team_means)) <= tol) {
            res.crossing = Crossing{last.fov_deg, last.diopters, last.team_means[0]};
        }
    }
    return res;
}

}  // namespace saclat::fairness
