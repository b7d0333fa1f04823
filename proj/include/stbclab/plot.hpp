#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "stbclab/csv.hpp"

namespace stbclab {

enum class Figure { spectral_efficiency, ser_vs_snr };

inline Figure figure_from_token(std::string_view token) {
    if (token == "spectral-efficiency") return Figure::spectral_efficiency;
    if (token == "ser-vs-snr") return Figure::ser_vs_snr;
    throw std::invalid_argument("unknown figure '" + std::string(token) +
                                "' (choose spectral-efficiency or ser-vs-snr)");
}

// Emits a self-contained gnuplot script plotting one series per CSV.
// Spectral-efficiency figures carry a dashed reference at 4 bits/s/Hz;
// SER figures use a log y axis.
inline std::string plot_script_text(const std::vector<std::string>& csv_paths, Figure figure) {
    if (csv_paths.empty()) throw std::invalid_argument("plot script needs at least one CSV");
    std::vector<std::string> titles;
    for (const std::string& path : csv_paths) {
        const std::vector<SerRecord> records = read_csv(path);  // also validates existence
        if (records.empty()) {
            titles.push_back(std::filesystem::path(path).stem().string());
        } else {
            std::string title =
                descriptor(records.front().scheme).name + " " + records.front().modulation;
            if (records.front().rotation_deg != 0.0) {
                char buf[32];
                std::snprintf(buf, sizeof(buf), " rot %.4g", records.front().rotation_deg);
                title += buf;
            }
            titles.push_back(title);
        }
    }

    std::string s;
    s += "# generated by stbclab plot\n";
    s += "set datafile separator \",\"\n";
    s += "set grid\n";
    s += "set xlabel \"SNR (dB)\"\n";
    if (figure == Figure::spectral_efficiency) {
        s += "set ylabel \"Effective spectral efficiency (bits/s/Hz)\"\n";
        s += "set key bottom right\n";
        s += "set yrange [0:4.5]\n";
    } else {
        s += "set ylabel \"SER\"\n";
        s += "set key bottom left\n";
        s += "set logscale y\n";
        s += "set format y \"10^{%L}\"\n";
    }
    s += "plot ";
    bool first = true;
    if (figure == Figure::spectral_efficiency) {
        s += "4.0 title \"4 bits/s/Hz\" with lines dashtype 2 linecolor rgb \"gray\"";
        first = false;
    }
    const char* ycol = figure == Figure::spectral_efficiency ? "7" : "6";
    for (size_t i = 0; i < csv_paths.size(); ++i) {
        if (!first) s += ", \\\n     ";
        first = false;
        s += "\"" + csv_paths[i] + "\" every ::1 using 4:" + ycol + " title \"" + titles[i] +
             "\" with linespoints";
    }
    s += "\n";
    return s;
}

inline void emit_plot_script(const std::vector<std::string>& csv_paths, Figure figure,
                             const std::string& out_path) {
    const std::string text = plot_script_text(csv_paths, figure);
    std::ofstream f(out_path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open '" + out_path + "' for writing");
    f << text;
}

}  // namespace stbclab
