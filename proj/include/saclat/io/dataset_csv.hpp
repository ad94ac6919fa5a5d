#pragma once

// LatencyDataset CSV: subject_id, block_id, condition_id, contrast,
// frequency_cpd, eccentricity_deg, latency_ms (+ latency_norm on output).

#include <ostream>
#include <span>

#include "saclat/io/csv.hpp"
#include "saclat/latency_model.hpp"

namespace saclat::io {

inline LatencyDataset dataset_from_table(const Table& t) {
    const std::size_t subject = t.column("subject_id");
    const std::size_t block = t.column("block_id");
    const std::size_t condition = t.column("condition_id");
    const std::size_t contrast = t.column("contrast");
    const std::size_t frequency = t.column("frequency_cpd");
    const std::size_t eccentricity = t.column("eccentricity_deg");
    const std::size_t latency = t.column("latency_ms");
    LatencyDataset d;
    d.records.reserve(t.rows.size());
    for (const auto& row : t.rows) {
        LatencyRecord r;
        r.subject_id = row[subject];
        r.block_id = row[block];
        r.condition_id = row[condition];
        r.features = {parse_double(row[contrast], "contrast"),
                      parse_double(row[frequency], "frequency_cpd"),
                      parse_double(row[eccentricity], "eccentricity_deg")};
        r.latency = parse_double(row[latency], "latency_ms");
        try {
            r.features.validate();
        } catch (const std::invalid_argument& e) {
            throw SchemaError(std::string("condition '") + r.condition_id + "': " + e.what());
        }
        d.records.push_back(std::move(r));
    }
    try {
        d.validate();
    } catch (const std::invalid_argument& e) {
        throw SchemaError(e.what());
    }
    return d;
}

/// Writes raw records with a latency_norm column taken from `normalized`
/// (same record order).
inline void write_normalized_csv(std::ostream& out, const LatencyDataset& raw,
                                 const LatencyDataset& normalized) {
    write_row(out, {"subject_id", "block_id", "condition_id", "contrast", "frequency_cpd",
                    "eccentricity_deg", "latency_ms", "latency_norm"});
    for (std::size_t i = 0; i < raw.records.size(); ++i) {
        const auto& r = raw.records[i];
        write_row(out, {r.subject_id, r.block_id, r.condition_id,
                        format_double(r.features.contrast), format_double(r.features.frequency),
                        format_double(r.features.eccentricity), format_double(r.latency),
                        format_double(normalized.records[i].latency)});
    }
}

inline void write_dataset_csv(std::ostream& out, const LatencyDataset& d) {
    write_row(out, {"subject_id", "block_id", "condition_id", "contrast", "frequency_cpd",
                    "eccentricity_deg", "latency_ms"});
    for (const auto& r : d.records) {
        write_row(out, {r.subject_id, r.block_id, r.condition_id,
                        format_double(r.features.contrast), format_double(r.features.frequency),
                        format_double(r.features.eccentricity), format_double(r.latency)});
    }
}

}  // namespace saclat::io
