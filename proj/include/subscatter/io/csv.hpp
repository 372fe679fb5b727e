#pragma once

#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "subscatter/errors.hpp"

namespace subscatter {

// All floating-point artifact output uses 12 significant digits so regression
// diffs stay meaningful.
inline std::string format_value(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

struct CsvTable {
    std::vector<std::string> comments;  // '#'-prefixed metadata lines
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

inline std::string csv_to_string(const CsvTable& t) {
    std::string out;
    for (const auto& c : t.comments) out += "# " + c + "\n";
    for (std::size_t i = 0; i < t.columns.size(); ++i) {
        if (i) out += ",";
        out += t.columns[i];
    }
    out += "\n";
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out += ",";
            out += format_value(row[i]);
        }
        out += "\n";
    }
    return out;
}

inline void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error("cannot open output file: " + path);
    f << content;
    if (!f) throw Error("failed writing output file: " + path);
}

inline void write_csv(const std::string& path, const CsvTable& t) {
    write_text_file(path, csv_to_string(t));
}

}  // namespace subscatter
