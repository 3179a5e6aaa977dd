#pragma once

#include <cstdio>
#include <fstream>
#include <string>

#include "hypflow/experiments.hpp"

// CSV and SVG emission. Floats are printed with 17 significant digits so that
// reruns with the same configuration and seed are byte-identical.

namespace hypflow {

inline std::string formatDouble(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline std::string reportCsv(const ExperimentReport& rep) {
    std::string out = rep.name + "\n";
    for (std::size_t i = 0; i < rep.columns.size(); ++i) {
        if (i) out += ",";
        out += rep.columns[i];
    }
    out += "\n";
    for (const auto& row : rep.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out += ",";
            out += formatDouble(row[i]);
        }
        out += "\n";
    }
    for (const auto& [key, value] : rep.summary)
        out += "# " + key + " = " + formatDouble(value) + "\n";
    for (const Check& c : rep.checks)
        out += std::string("# check ") + (c.pass ? "PASS " : "FAIL ") + c.name + " value=" +
               formatDouble(c.value) + " threshold=" + formatDouble(c.threshold) + "\n";
    return out;
}

inline void writeFile(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << content;
}

// Self-contained log-log polyline plot of the first two report columns.
inline std::string reportSvg(const ExperimentReport& rep) {
    const int W = 480, H = 360, M = 50;
    std::string svg = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
                      std::to_string(W) + "\" height=\"" + std::to_string(H) + "\">\n";
    svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg += "<text x=\"10\" y=\"20\" font-size=\"13\">" + rep.name + "</text>\n";
    std::vector<std::pair<double, double>> pts;
    for (const auto& row : rep.rows)
        if (row.size() >= 2 && row[0] > 0.0 && row[1] > 0.0)
            pts.push_back({std::log10(row[0]), std::log10(row[1])});
    if (pts.size() >= 2) {
        double x0 = pts[0].first, x1 = pts[0].first;
        double y0 = pts[0].second, y1 = pts[0].second;
        for (auto& p : pts) {
            x0 = std::min(x0, p.first);
            x1 = std::max(x1, p.first);
            y0 = std::min(y0, p.second);
            y1 = std::max(y1, p.second);
        }
        if (x1 - x0 < 1e-12) x1 = x0 + 1.0;
        if (y1 - y0 < 1e-12) y1 = y0 + 1.0;
        svg += "<polyline fill=\"none\" stroke=\"black\" points=\"";
        for (auto& p : pts) {
            double px = M + (p.first - x0) / (x1 - x0) * (W - 2 * M);
            double py = H - M - (p.second - y0) / (y1 - y0) * (H - 2 * M);
            svg += formatDouble(px) + "," + formatDouble(py) + " ";
        }
        svg += "\"/>\n";
    }
    svg += "</svg>\n";
    return svg;
}

}  // namespace hypflow
