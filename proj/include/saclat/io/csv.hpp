#pragma once

// Minimal header-keyed CSV reading/writing: comma separated, header row
// required, '.' decimal separator, no quoting.

#include <charconv>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace saclat::io {

class SchemaError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
        s.remove_prefix(1);
    }
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
        s.remove_suffix(1);
    }
    return s;
}

inline std::vector<std::string> split(std::string_view line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        out.emplace_back(trim(line.substr(start, comma - start)));
        if (comma == std::string_view::npos) {
            break;
        }
        start = comma + 1;
    }
    return out;
}

}  // namespace detail

inline double parse_double(std::string_view s, std::string_view what = "value") {
    double v = 0.0;
    if (!s.empty() && s.front() == '+') {
        s.remove_prefix(1);
    }
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) {
        throw SchemaError("cannot parse " + std::string(what) + " '" + std::string(s) +
                          "' as a number");
    }
    return v;
}

/// Shortest decimal form that round-trips to the same double.
inline std::string format_double(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::optional<std::size_t> find(std::string_view name) const {
        for (std::size_t i = 0; i < header.size(); ++i) {
            if (header[i] == name) {
                return i;
            }
        }
        return std::nullopt;
    }

    std::size_t column(std::string_view name) const {
        if (auto i = find(name)) {
            return *i;
        }
        throw SchemaError("missing required column '" + std::string(name) + "'");
    }

    bool has(std::string_view name) const { return find(name).has_value(); }
};

inline Table read_csv(std::istream& in) {
    Table t;
    std::string line;
    bool have_header = false;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (detail::trim(line).empty()) {
            continue;
        }
        auto fields = detail::split(line);
        if (!have_header) {
            if (!fields.empty() && fields[0].starts_with("\xEF\xBB\xBF")) {
                fields[0].erase(0, 3);
            }
            t.header = std::move(fields);
            have_header = true;
            continue;
        }
        if (fields.size() != t.header.size()) {
            throw SchemaError("line " + std::to_string(line_no) + ": expected " +
                              std::to_string(t.header.size()) + " fields, got " +
                              std::to_string(fields.size()));
        }
        t.rows.push_back(std::move(fields));
    }
    if (!have_header) {
        throw SchemaError("CSV input is empty (header row required)");
    }
    return t;
}

inline Table read_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw SchemaError("cannot open '" + path + "'");
    }
    return read_csv(in);
}

inline void write_row(std::ostream& out, const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) {
            out << ',';
        }
        out << fields[i];
    }
    out << '\n';
}

}  // namespace saclat::io
