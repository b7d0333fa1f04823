#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "stbclab/montecarlo.hpp"
#include "stbclab/schemes.hpp"

namespace stbclab {

inline constexpr const char* kCsvHeader =
    "code,modulation,rotation_deg,snr_db,trials,ser,eta,erasures,seed";

// 17 significant digits round-trips doubles exactly.
inline std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline std::string csv_row(const SerRecord& r) {
    std::string row;
    row += descriptor(r.scheme).name;
    row += ',';
    row += r.modulation;
    row += ',';
    row += format_double(r.rotation_deg);
    row += ',';
    row += format_double(r.snr_db);
    row += ',';
    row += std::to_string(r.trials);
    row += ',';
    row += format_double(r.ser);
    row += ',';
    row += format_double(r.eta);
    row += ',';
    row += std::to_string(r.erasures);
    row += ',';
    row += std::to_string(r.seed);
    return row;
}

inline std::string csv_text(const std::vector<SerRecord>& records) {
    std::string text = kCsvHeader;
    text += '\n';
    for (const SerRecord& r : records) {
        text += csv_row(r);
        text += '\n';
    }
    return text;
}

// UTF-8, LF line endings, one row per (scheme, snr) point.
inline void write_csv(const std::vector<SerRecord>& records, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open '" + path + "' for writing");
    f << csv_text(records);
    if (!f) throw std::runtime_error("failed writing '" + path + "'");
}

inline std::vector<SerRecord> parse_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("CSV is empty");
    if (line != kCsvHeader) throw std::runtime_error("unexpected CSV header: " + line);
    std::vector<SerRecord> out;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (cells.size() != 9) throw std::runtime_error("malformed CSV row: " + line);
        SerRecord r;
        r.scheme = scheme_from_token(cells[0]);
        r.modulation = cells[1];
        r.rotation_deg = std::stod(cells[2]);
        r.snr_db = std::stod(cells[3]);
        r.trials = std::stol(cells[4]);
        r.ser = std::stod(cells[5]);
        r.eta = std::stod(cells[6]);
        r.erasures = std::stol(cells[7]);
        r.seed = std::stoull(cells[8]);
        r.symbol_errors = std::lround(r.ser * static_cast<double>(r.trials - r.erasures) *
                                      descriptor(r.scheme).K);
        out.push_back(std::move(r));
    }
    return out;
}

inline std::vector<SerRecord> read_csv(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open '" + path + "'");
    return parse_csv(f);
}

}  // namespace stbclab
