#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "vander/common.hpp"

namespace vander {

/// Column-schema'd numeric table with key:value metadata; the one output
/// format of the experiment harness. CSV rendering is locale-free and prints
/// doubles with %.17g, so equal tables produce byte-equal files.
struct ResultTable {
    struct Column {
        std::string name;
        std::string unit; // empty for dimensionless
    };

    std::vector<Column> columns;
    std::vector<std::vector<double>> rows;
    std::vector<std::pair<std::string, std::string>> metadata;

    void add_row(std::vector<double> row) {
        if (row.size() != columns.size()) throw std::invalid_argument("ResultTable: row width mismatch");
        rows.push_back(std::move(row));
    }

    void meta(const std::string& key, const std::string& value) { metadata.emplace_back(key, value); }
    void meta(const std::string& key, double value) { metadata.emplace_back(key, format(value)); }
    void meta(const std::string& key, int64_t value) { metadata.emplace_back(key, std::to_string(value)); }

    static std::string format(double v) {
        char buf[40];
        std::snprintf(buf, sizeof(buf), "%.17g", v);
        return buf;
    }

    std::string csv() const {
        std::ostringstream os;
        for (size_t c = 0; c < columns.size(); ++c) {
            if (c) os << ',';
            os << columns[c].name;
            if (!columns[c].unit.empty()) os << '[' << columns[c].unit << ']';
        }
        os << '\n';
        for (const auto& row : rows) {
            for (size_t c = 0; c < row.size(); ++c) {
                if (c) os << ',';
                os << format(row[c]);
            }
            os << '\n';
        }
        return os.str();
    }

    std::string meta_text() const {
        std::ostringstream os;
        for (const auto& [k, v] : metadata) os << k << ": " << v << '\n';
        return os.str();
    }

    /// Writes `<path>` (CSV) and `<path>.meta` (sidecar metadata).
    void write(const std::string& path) const {
        std::ofstream f(path, std::ios::binary);
        if (!f) throw std::runtime_error("cannot open output file " + path);
        f << csv();
        std::ofstream m(path + ".meta", std::ios::binary);
        m << meta_text();
    }

    /// Equality of schema, data, and metadata, ignoring wall-time entries
    /// (the only volatile metadata key).
    bool equivalent(const ResultTable& o) const {
        if (csv() != o.csv()) return false;
        auto strip = [](const ResultTable& t) {
            std::vector<std::pair<std::string, std::string>> kept;
            for (const auto& kv : t.metadata)
                if (kv.first != "wall_time_s") kept.push_back(kv);
            return kept;
        };
        return strip(*this) == strip(o);
    }
};

} // namespace vander
