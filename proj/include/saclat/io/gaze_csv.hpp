#pragma once

// Gaze CSV: trial_id, t_ms, x_deg, y_deg (rows of one trial in time order).
// Trials CSV: trial_id, onset_ms, origin_x, origin_y, target1_x, target1_y
// [, target2_x, target2_y, ...]. Latency CSV: trial_id, latency_ms, status.

#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "saclat/gaze.hpp"
#include "saclat/io/csv.hpp"

namespace saclat::io {

/// Traces keyed by trial id; times converted to seconds.
inline std::map<std::string, gaze::GazeTrace> traces_from_table(const Table& t) {
    const std::size_t id = t.column("trial_id");
    const std::size_t tm = t.column("t_ms");
    const std::size_t x = t.column("x_deg");
    const std::size_t y = t.column("y_deg");
    std::map<std::string, gaze::GazeTrace> out;
    for (const auto& row : t.rows) {
        out[row[id]].samples.push_back({parse_double(row[tm], "t_ms") / 1000.0,
                                        parse_double(row[x], "x_deg"),
                                        parse_double(row[y], "y_deg")});
    }
    for (const auto& [trial, trace] : out) {
        for (std::size_t i = 1; i < trace.samples.size(); ++i) {
            if (!(trace.samples[i].t > trace.samples[i - 1].t)) {
                throw SchemaError("gaze trial '" + trial + "': timestamps must be strictly increasing");
            }
        }
    }
    return out;
}

inline std::map<std::string, gaze::TrialRecord> trials_from_table(const Table& t) {
    const std::size_t id = t.column("trial_id");
    const std::size_t onset = t.column("onset_ms");
    const std::size_t ox = t.column("origin_x");
    const std::size_t oy = t.column("origin_y");
    std::vector<std::pair<std::size_t, std::size_t>> target_cols;
    for (int k = 1;; ++k) {
        const auto cx = t.find("target" + std::to_string(k) + "_x");
        const auto cy = t.find("target" + std::to_string(k) + "_y");
        if (!cx || !cy) {
            break;
        }
        target_cols.emplace_back(*cx, *cy);
    }
    if (target_cols.empty()) {
        throw SchemaError("missing required columns 'target1_x', 'target1_y'");
    }
    std::map<std::string, gaze::TrialRecord> out;
    for (const auto& row : t.rows) {
        gaze::TrialRecord r;
        r.stimulus_onset = parse_double(row[onset], "onset_ms") / 1000.0;
        r.origin = {parse_double(row[ox], "origin_x"), parse_double(row[oy], "origin_y")};
        for (const auto& [cx, cy] : target_cols) {
            // Optional extra targets may be left blank.
            if (row[cx].empty() && row[cy].empty()) {
                continue;
            }
            r.targets.push_back({parse_double(row[cx], "target_x"), parse_double(row[cy], "target_y")});
        }
        if (!out.emplace(row[id], std::move(r)).second) {
            throw SchemaError("duplicate trial_id '" + row[id] + "'");
        }
    }
    return out;
}

struct LatencyRow {
    std::string trial_id;
    gaze::LatencyResult result;
};

inline void write_latency_csv(std::ostream& out, const std::vector<LatencyRow>& rows) {
    write_row(out, {"trial_id", "latency_ms", "status"});
    for (const auto& r : rows) {
        write_row(out, {r.trial_id,
                        r.result.latency ? format_double(*r.result.latency * 1000.0) : std::string{},
                        gaze::to_string(r.result.status)});
    }
}

}  // namespace saclat::io
