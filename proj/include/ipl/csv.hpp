#ifndef IPL_CSV_HPP
#define IPL_CSV_HPP

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "ipl/common.hpp"
#include "ipl/timeseries.hpp"

namespace ipl {

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows; // data rows, header excluded

    Eigen::Index column(const std::string& name, const std::string& role) const {
        for (std::size_t i = 0; i < header.size(); ++i)
            if (header[i] == name) return static_cast<Eigen::Index>(i);
        throw ConfigError(role + " column '" + name + "' not found in CSV header");
    }
};

/// RFC-4180-style reader: quoted fields may contain commas, doubled quotes,
/// and line breaks; CRLF and LF both end records. The first record is the
/// header; every later record must have the same field count or the row is
/// rejected with its line number.
inline CsvTable read_csv(std::istream& in, const std::string& origin = "csv") {
    CsvTable table;
    std::vector<std::string> record;
    std::string field;
    bool in_quotes = false;
    bool field_started = false; // a quote was consumed or a char was written
    std::size_t line = 1;
    std::size_t record_line = 1;

    auto end_field = [&]() {
        record.push_back(std::move(field));
        field.clear();
        field_started = false;
    };
    auto end_record = [&]() {
        end_field();
        const bool blank = record.size() == 1 && record[0].empty();
        if (!blank) {
            if (table.header.empty()) {
                table.header = std::move(record);
            } else if (record.size() != table.header.size()) {
                throw ConfigError(origin + " line " + std::to_string(record_line) + ": expected " +
                                  std::to_string(table.header.size()) + " fields, got " +
                                  std::to_string(record.size()));
            } else {
                table.rows.push_back(std::move(record));
            }
        }
        record.clear();
        record_line = line;
    };

    char c;
    while (in.get(c)) {
        if (in_quotes) {
            if (c == '"') {
                if (in.peek() == '"') {
                    in.get(c);
                    field += '"';
                } else {
                    in_quotes = false;
                }
            } else {
                if (c == '\n') ++line;
                field += c;
            }
            continue;
        }
        switch (c) {
            case '"':
                if (!field_started && field.empty()) {
                    in_quotes = true;
                    field_started = true;
                } else {
                    field += c; // stray quote mid-field, keep it literal
                }
                break;
            case ',': end_field(); break;
            case '\r':
                if (in.peek() == '\n') in.get(c);
                ++line;
                end_record();
                break;
            case '\n':
                ++line;
                end_record();
                break;
            default:
                field += c;
                field_started = true;
        }
    }
    if (in_quotes) throw ConfigError(origin + ": unterminated quoted field");
    if (field_started || !field.empty() || !record.empty()) end_record();
    if (table.header.empty()) throw ConfigError(origin + ": empty CSV (no header row)");
    return table;
}

inline CsvTable read_csv_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open '" + path + "' for reading");
    return read_csv(in, path);
}

inline std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += '"';
    return out;
}

inline void write_csv(std::ostream& out, const std::vector<std::string>& header,
                      const std::vector<std::vector<std::string>>& rows) {
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (i > 0) out << ',';
        out << csv_escape(header[i]);
    }
    out << '\n';
    for (const auto& row : rows) {
        if (row.size() != header.size())
            throw ConfigError("write_csv: row has " + std::to_string(row.size()) +
                              " fields, header has " + std::to_string(header.size()));
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i > 0) out << ',';
            out << csv_escape(row[i]);
        }
        out << '\n';
    }
}

inline void write_csv_file(const std::string& path, const std::vector<std::string>& header,
                           const std::vector<std::vector<std::string>>& rows) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot open '" + path + "' for writing");
    write_csv(out, header, rows);
    if (!out) throw ConfigError("failed writing '" + path + "'");
}

/// Which CSV columns play which role. Empty feature list means every column
/// that is not the target or the timestamp, in file order.
struct ColumnRoles {
    std::string timestamp; // optional; empty = row order is time
    std::string target;
    std::vector<std::string> features;
};

/// Builds a RawSeries from a parsed table: numeric parsing with row-located
/// errors, NaN/infinite entries rejected, and numeric timestamps checked
/// for time order (non-numeric timestamps are carried as labels).
inline RawSeries raw_series_from_csv(const CsvTable& table, const ColumnRoles& roles) {
    if (roles.target.empty()) throw ConfigError("no target column configured");
    const Eigen::Index target_col = table.column(roles.target, "target");

    Eigen::Index ts_col = -1;
    if (!roles.timestamp.empty()) ts_col = table.column(roles.timestamp, "timestamp");

    std::vector<Eigen::Index> feature_cols;
    RawSeries series;
    if (roles.features.empty()) {
        for (std::size_t i = 0; i < table.header.size(); ++i) {
            const auto idx = static_cast<Eigen::Index>(i);
            if (idx == target_col || idx == ts_col) continue;
            feature_cols.push_back(idx);
            series.feature_names.push_back(table.header[i]);
        }
    } else {
        for (const auto& name : roles.features) {
            const Eigen::Index idx = table.column(name, "feature");
            if (idx == target_col)
                throw ConfigError("column '" + name + "' is both feature and target");
            feature_cols.push_back(idx);
            series.feature_names.push_back(name);
        }
    }
    if (table.rows.empty()) throw ConfigError("CSV has a header but no data rows");

    const auto T = static_cast<Eigen::Index>(table.rows.size());
    series.features.resize(T, static_cast<Eigen::Index>(feature_cols.size()));
    series.targets.resize(T);
    series.target_name = roles.target;

    for (Eigen::Index r = 0; r < T; ++r) {
        const auto& row = table.rows[static_cast<std::size_t>(r)];
        const std::string where = "row " + std::to_string(r + 2); // header is line 1
        for (std::size_t k = 0; k < feature_cols.size(); ++k) {
            const double v = parse_double(
                row[static_cast<std::size_t>(feature_cols[k])],
                "column '" + series.feature_names[k] + "' " + where);
            if (!std::isfinite(v))
                throw ConfigError("column '" + series.feature_names[k] + "' " + where +
                                  ": non-finite value");
            series.features(r, static_cast<Eigen::Index>(k)) = v;
        }
        const double y =
            parse_double(row[static_cast<std::size_t>(target_col)], "target " + where);
        if (!std::isfinite(y)) throw ConfigError("target " + where + ": non-finite value");
        series.targets(r) = y;
        if (ts_col >= 0) series.timestamps.push_back(row[static_cast<std::size_t>(ts_col)]);
    }

    if (ts_col >= 0) {
        bool all_numeric = true;
        double prev = 0.0;
        for (std::size_t i = 0; i < series.timestamps.size(); ++i) {
            double v = 0.0;
            try {
                v = parse_double(series.timestamps[i], "timestamp");
            } catch (const ConfigError&) {
                all_numeric = false;
                break;
            }
            if (i > 0 && v < prev)
                throw ConfigError("timestamp row " + std::to_string(i + 2) +
                                  ": values are not in time order");
            prev = v;
        }
        (void)all_numeric; // non-numeric timestamps are labels; row order is time
    }
    return series;
}

inline RawSeries load_raw_series(const std::string& path, const ColumnRoles& roles) {
    return raw_series_from_csv(read_csv_file(path), roles);
}

/// Writes a series back out with one column per feature plus the target
/// (and timestamps when present). Numbers use shortest round-trip format.
inline void save_raw_series(const std::string& path, const RawSeries& series) {
    series.validate();
    std::vector<std::string> header;
    const bool has_ts = !series.timestamps.empty();
    if (has_ts) header.push_back("timestamp");
    header.insert(header.end(), series.feature_names.begin(), series.feature_names.end());
    header.push_back(series.target_name);

    std::vector<std::vector<std::string>> rows;
    rows.reserve(static_cast<std::size_t>(series.rows()));
    for (Eigen::Index r = 0; r < series.rows(); ++r) {
        std::vector<std::string> row;
        if (has_ts) row.push_back(series.timestamps[static_cast<std::size_t>(r)]);
        for (Eigen::Index k = 0; k < series.dim(); ++k)
            row.push_back(format_double(series.features(r, k)));
        row.push_back(format_double(series.targets(r)));
        rows.push_back(std::move(row));
    }
    write_csv_file(path, header, rows);
}

} // namespace ipl

#endif // IPL_CSV_HPP
