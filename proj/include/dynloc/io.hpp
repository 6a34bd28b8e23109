#pragma once

// Deterministic file I/O helpers: fixed-format floating-point text (so
// identical runs produce byte-identical artifacts), whole-file read/write,
// and the counts-CSV reader for the g² pipeline.

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "dynloc/errors.hpp"
#include "dynloc/photon_stats.hpp"

namespace dynloc {

// 12 significant digits, shortest form; locale-independent.
inline std::string fmt(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

inline std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw io_error("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) throw io_error("read failed: " + path);
    return ss.str();
}

inline void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw io_error("cannot open file for writing: " + path);
    out << text;
    if (!out) throw io_error("write failed: " + path);
}

inline nlohmann::json read_json_file(const std::string& path) {
    std::string text = read_text_file(path);
    try {
        return nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw io_error("JSON parse error in " + path + ": " + e.what());
    }
}

// A counts row: label plus the five CountRecord fields. Rows may instead give
// a pre-computed g² value directly ("label,g,dg" after a matching header),
// which covers instrument reports that only quote g ± δg.
struct LabeledG2Input {
    std::string label;
    bool direct = false;
    CountRecord record;  // when !direct
    double g = 0.0;      // when direct
    double dg = 0.0;
};

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (ch != '\r') {
            cur += ch;
        }
    }
    out.push_back(cur);
    for (std::string& s : out) {
        std::size_t b = s.find_first_not_of(" \t");
        std::size_t e = s.find_last_not_of(" \t");
        s = b == std::string::npos ? "" : s.substr(b, e - b + 1);
    }
    return out;
}

inline double parse_double_field(const std::string& tok, int lineno) {
    try {
        std::size_t pos = 0;
        double v = std::stod(tok, &pos);
        if (pos != tok.size()) throw std::invalid_argument(tok);
        return v;
    } catch (const std::exception&) {
        throw io_error("counts CSV: bad number '" + tok + "' at line " + std::to_string(lineno));
    }
}

// Header either "label,n_x,n_y,n_xy,T,tau" (count records) or "label,g,dg"
// (direct values). Blank lines and lines starting with '#' are skipped.
inline std::vector<LabeledG2Input> read_counts_csv(const std::string& path) {
    std::istringstream in(read_text_file(path));
    std::string line;
    int lineno = 0;
    bool header_seen = false;
    bool direct = false;
    std::vector<LabeledG2Input> rows;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        if (line[line.find_first_not_of(" \t")] == '#') continue;
        std::vector<std::string> f = split_csv_line(line);
        if (!header_seen) {
            if (f.size() == 6 && f[0] == "label" && f[1] == "n_x")
                direct = false;
            else if (f.size() == 3 && f[0] == "label" && f[1] == "g")
                direct = true;
            else
                throw io_error("counts CSV: unrecognized header at line " + std::to_string(lineno) +
                               " (want label,n_x,n_y,n_xy,T,tau or label,g,dg)");
            header_seen = true;
            continue;
        }
        LabeledG2Input row;
        row.label = f[0];
        row.direct = direct;
        if (direct) {
            if (f.size() != 3)
                throw io_error("counts CSV: expected 3 fields at line " + std::to_string(lineno));
            row.g = parse_double_field(f[1], lineno);
            row.dg = parse_double_field(f[2], lineno);
        } else {
            if (f.size() != 6)
                throw io_error("counts CSV: expected 6 fields at line " + std::to_string(lineno));
            row.record.n_x = parse_double_field(f[1], lineno);
            row.record.n_y = parse_double_field(f[2], lineno);
            row.record.n_xy = parse_double_field(f[3], lineno);
            row.record.T_s = parse_double_field(f[4], lineno);
            row.record.tau_s = parse_double_field(f[5], lineno);
        }
        rows.push_back(row);
    }
    if (!header_seen || rows.empty()) throw io_error("counts CSV: no data rows in " + path);
    return rows;
}

} // namespace dynloc
