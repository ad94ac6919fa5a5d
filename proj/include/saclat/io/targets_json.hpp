#pragma once

// targets.json and display.json.
//
// display.json: {"width_cm", "width_px", "height_px"} plus exactly one of
//   "fov_deg", "distance_cm", "diopters".
// targets.json: array of
//   {"frame_id", "team", "bbox": [x, y, w, h] (px),
//    "target_luminance", "background_luminance",
//    one of "frequency_cpd" | "frequency_cpcm" | "patch" (PGM path)}
// An entry with only a frame_id (no bbox) marks a frame without targets.

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "saclat/fairness.hpp"
#include "saclat/geometry.hpp"
#include "saclat/io/csv.hpp"
#include "saclat/io/model_json.hpp"
#include "saclat/io/pgm.hpp"
#include "saclat/stimulus_features.hpp"

namespace saclat::io {

inline DisplayConfig display_from_json(const json& j) {
    try {
        const double w = j.at("width_cm").get<double>();
        const int wpx = j.at("width_px").get<int>();
        const int hpx = j.at("height_px").get<int>();
        const int given = static_cast<int>(j.contains("fov_deg")) +
                          static_cast<int>(j.contains("distance_cm")) +
                          static_cast<int>(j.contains("diopters"));
        if (given != 1) {
            throw SchemaError("display: give exactly one of fov_deg, distance_cm, diopters");
        }
        if (j.contains("fov_deg")) {
            return DisplayConfig::from_fov(w, wpx, hpx, j["fov_deg"].get<double>());
        }
        if (j.contains("distance_cm")) {
            return DisplayConfig::from_distance(w, wpx, hpx, j["distance_cm"].get<double>());
        }
        return DisplayConfig::from_diopters(w, wpx, hpx, j["diopters"].get<double>());
    } catch (const json::exception& e) {
        throw SchemaError(std::string("display: ") + e.what());
    } catch (const std::domain_error& e) {
        throw SchemaError(std::string("display: ") + e.what());
    }
}

inline json to_json(const DisplayConfig& cfg) {
    return {{"width_cm", cfg.width_cm()},
            {"width_px", cfg.width_px()},
            {"height_px", cfg.height_px()},
            {"distance_cm", cfg.distance_cm()}};
}

struct TargetSet {
    std::vector<fairness::TargetObservation> targets;
    std::size_t empty_frames = 0;  // frames listed without any target
};

/// `base_dir` resolves relative patch paths.
inline TargetSet targets_from_json(const json& j, const DisplayConfig& cfg,
                                   const std::filesystem::path& base_dir = {}) {
    if (!j.is_array()) {
        throw SchemaError("targets.json: expected an array");
    }
    TargetSet out;
    std::vector<std::string> marker_frames;
    std::vector<std::string> target_frames;
    for (const auto& e : j) {
        try {
            const auto frame = e.at("frame_id").is_string() ? e["frame_id"].get<std::string>()
                                                            : e["frame_id"].dump();
            if (!e.contains("bbox")) {
                marker_frames.push_back(frame);
                continue;
            }
            fairness::TargetObservation t;
            t.frame_id = frame;
            t.team = e.at("team").get<std::string>();
            const auto box = e.at("bbox").get<std::vector<double>>();
            if (box.size() != 4) {
                throw SchemaError("targets.json: bbox needs [x, y, w, h]");
            }
            t.bbox = {box[0], box[1], box[2], box[3]};
            t.target_luminance = e.at("target_luminance").get<double>();
            t.background_luminance = e.at("background_luminance").get<double>();
            const int given = static_cast<int>(e.contains("frequency_cpd")) +
                              static_cast<int>(e.contains("frequency_cpcm")) +
                              static_cast<int>(e.contains("patch"));
            if (given != 1) {
                throw SchemaError("targets.json: frame '" + frame +
                                  "' needs exactly one of frequency_cpd, frequency_cpcm, patch");
            }
            if (e.contains("frequency_cpcm")) {
                t.frequency_cpcm = e["frequency_cpcm"].get<double>();
            } else if (e.contains("frequency_cpd")) {
                // Given for the configured display: convert back to the screen.
                const double ecc = fairness::eccentricity(t.bbox, cfg);
                t.frequency_cpcm = retinal_to_display_frequency(e["frequency_cpd"].get<double>(), ecc, cfg);
            } else {
                std::filesystem::path p = e["patch"].get<std::string>();
                if (p.is_relative()) {
                    p = base_dir / p;
                }
                const LuminancePatch patch{read_pgm_file(p.string()), cfg.pixel_pitch_cm()};
                t.frequency_cpcm = representative_display_frequency(patch);
            }
            fairness::validate(t, cfg);
            target_frames.push_back(frame);
            out.targets.push_back(std::move(t));
        } catch (const json::exception& ex) {
            throw SchemaError(std::string("targets.json: ") + ex.what());
        } catch (const std::invalid_argument& ex) {
            throw SchemaError(std::string("targets.json: ") + ex.what());
        }
    }
    std::sort(marker_frames.begin(), marker_frames.end());
    marker_frames.erase(std::unique(marker_frames.begin(), marker_frames.end()), marker_frames.end());
    std::sort(target_frames.begin(), target_frames.end());
    for (const auto& f : marker_frames) {
        if (!std::binary_search(target_frames.begin(), target_frames.end(), f)) {
            ++out.empty_frames;
        }
    }
    return out;
}

inline json to_json(const fairness::TargetObservation& t) {
    return {{"frame_id", t.frame_id},
            {"team", t.team},
            {"bbox", {t.bbox.x, t.bbox.y, t.bbox.w, t.bbox.h}},
            {"target_luminance", t.target_luminance},
            {"background_luminance", t.background_luminance},
            {"frequency_cpcm", t.frequency_cpcm}};
}

}  // namespace saclat::io
