#pragma once

#include <charconv>
#include <cmath>
#include <fstream>
#include <string>
#include <vector>

#include "common.hpp"

namespace tailsel {

struct RawDataset {
    std::vector<std::string> feature_names;
    std::vector<std::vector<double>> columns;  // column-major, one vector per feature
    std::vector<double> target_raw;
    std::string target_name;
    std::size_t n = 0;
    std::vector<std::string> warnings;
};

struct BinaryDataset {
    std::vector<std::string> feature_names;
    std::vector<std::vector<double>> columns;
    std::vector<int> target;  // 0/1
    std::string target_name;
    std::size_t n = 0;
    std::vector<std::string> warnings;
};

namespace detail {

inline std::string trim_cell(const std::string& s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && (s[b] == ' ' || s[b] == '\t' || s[b] == '\r')) ++b;
    while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r')) --e;
    return s.substr(b, e - b);
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (;;) {
        const std::size_t pos = line.find(',', start);
        if (pos == std::string::npos) {
            out.push_back(trim_cell(line.substr(start)));
            break;
        }
        out.push_back(trim_cell(line.substr(start, pos - start)));
        start = pos + 1;
    }
    return out;
}

inline bool parse_number(const std::string& cell, double& out) {
    const char* first = cell.data();
    const char* last = cell.data() + cell.size();
    const auto res = std::from_chars(first, last, out);
    return res.ec == std::errc{} && res.ptr == last && std::isfinite(out);
}

inline void strip_bom(std::string& line) {
    if (line.size() >= 3 && line[0] == '\xEF' && line[1] == '\xBB' && line[2] == '\xBF')
        line.erase(0, 3);
}

}  // namespace detail

// header row of a CSV, for resolving a default target column name
inline std::vector<std::string> read_csv_header(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open file: " + path);
    std::string line;
    if (!std::getline(in, line)) throw DataError("empty file: " + path);
    detail::strip_bom(line);
    return detail::split_csv_line(line);
}

inline RawDataset load_csv(const std::string& path, const std::string& target_name) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open file: " + path);

    std::string line;
    if (!std::getline(in, line)) throw DataError("empty file: " + path);
    detail::strip_bom(line);
    const std::vector<std::string> header = detail::split_csv_line(line);
    const std::size_t ncol = header.size();

    std::size_t target_col = ncol;
    for (std::size_t j = 0; j < ncol; ++j) {
        if (header[j] == target_name) {
            target_col = j;
            break;
        }
    }
    if (target_col == ncol) throw DataError("missing target column '" + target_name + "'");

    RawDataset data;
    data.target_name = target_name;
    for (std::size_t j = 0; j < ncol; ++j)
        if (j != target_col) data.feature_names.push_back(header[j]);
    data.columns.assign(data.feature_names.size(), {});

    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || (line.size() == 1 && line[0] == '\r')) continue;
        const std::vector<std::string> cells = detail::split_csv_line(line);
        if (cells.size() != ncol)
            throw DataError("row " + std::to_string(line_no) + " has " +
                            std::to_string(cells.size()) + " cells, expected " +
                            std::to_string(ncol));
        std::size_t feat = 0;
        for (std::size_t j = 0; j < ncol; ++j) {
            if (cells[j].empty())
                throw DataError("missing value at row " + std::to_string(line_no) +
                                ", column '" + header[j] + "'");
            double value = 0.0;
            if (!detail::parse_number(cells[j], value))
                throw DataError("non-numeric cell at row " + std::to_string(line_no) +
                                ", column '" + header[j] + "': '" + cells[j] + "'");
            if (j == target_col)
                data.target_raw.push_back(value);
            else
                data.columns[feat++].push_back(value);
        }
        ++data.n;
    }
    if (data.n == 0) throw DataError("no data rows in " + path);

    auto is_constant = [](const std::vector<double>& col) {
        for (const double v : col)
            if (v != col.front()) return false;
        return true;
    };
    for (std::size_t j = 0; j < data.columns.size(); ++j)
        if (is_constant(data.columns[j]))
            data.warnings.push_back("feature '" + data.feature_names[j] + "' is constant");
    if (is_constant(data.target_raw))
        throw DataError("target column '" + target_name + "' is constant");

    return data;
}

// 0 stays 0; 1 and 2 collapse to 1; anything else is rejected
inline BinaryDataset binarize_target(const RawDataset& raw) {
    BinaryDataset out;
    out.feature_names = raw.feature_names;
    out.columns = raw.columns;
    out.target_name = raw.target_name;
    out.n = raw.n;
    out.warnings = raw.warnings;
    out.target.reserve(raw.target_raw.size());
    for (const double t : raw.target_raw) {
        if (t == 0.0)
            out.target.push_back(0);
        else if (t == 1.0 || t == 2.0)
            out.target.push_back(1);
        else
            throw DataError("unexpected target label " + std::to_string(t) +
                            " (expected 0, 1, or 2)");
    }
    return out;
}

}  // namespace tailsel
