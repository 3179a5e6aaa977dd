#pragma once

#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "hypflow/verification.hpp"

// Flat sectioned key=value configuration. Example:
//
//   [surface]
//   model = octagon-genus2
//
//   [observable]
//   base = 1.0
//   bump = 0.12 1.35 0.9 0.1 0.7      # x y theta amplitude radius
//
//   [quadrature]
//   step = 0.01
//   tolerance = 1e-10
//   max_time = 40
//
//   [experiment]
//   delta_grid = 0.08 0.04 0.02
//   samples = 100000
//   frames = 50
//   seed = 20250817
//   t_grid = 1 2 3 4 5 6 7 8
//
//   [output]
//   directory = out
//   plots = off

namespace hypflow {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct BumpConfig {
    double x = 0.12, y = 1.35, theta = 0.9;
    double amplitude = 0.1, radius = 0.7;
};

struct Config {
    std::string surface = "octagon-genus2";
    double base = 1.0;
    std::vector<BumpConfig> bumps = {BumpConfig{}};
    double quadStep = 0.01;
    double quadTolerance = 1e-10;
    double quadMaxTime = 40.0;
    std::vector<double> deltaGrid = {0.08, 0.04, 0.02};
    int samples = 100000;
    int frames = 50;
    std::uint64_t seed = 20250817;
    std::vector<double> tGrid = {1, 2, 3, 4, 5, 6, 7, 8};
    std::string outDir = "out";
    bool plots = false;
};

namespace detail {
inline std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r\n");
    std::size_t b = s.find_last_not_of(" \t\r\n");
    return a == std::string::npos ? "" : s.substr(a, b - a + 1);
}
inline std::vector<double> parseNumbers(const std::string& s, const std::string& key) {
    std::vector<double> out;
    std::istringstream in(s);
    double v;
    while (in >> v) out.push_back(v);
    if (out.empty()) throw ConfigError("config: no numbers in value for " + key);
    return out;
}
}  // namespace detail

inline Config parseConfig(std::istream& in) {
    Config cfg;
    cfg.bumps.clear();
    std::string line, section;
    int lineNo = 0;
    bool sawBase = false;
    while (std::getline(in, line)) {
        ++lineNo;
        std::size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("config line " + std::to_string(lineNo) + ": bad section");
            section = line.substr(1, line.size() - 2);
            continue;
        }
        std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineNo) + ": expected key=value");
        std::string key = detail::trim(line.substr(0, eq));
        std::string value = detail::trim(line.substr(eq + 1));
        std::string full = section + "." + key;
        try {
            if (full == "surface.model") cfg.surface = value;
            else if (full == "observable.base") { cfg.base = std::stod(value); sawBase = true; }
            else if (full == "observable.bump") {
                auto nums = detail::parseNumbers(value, full);
                if (nums.size() != 5)
                    throw ConfigError("bump needs 5 numbers: x y theta amplitude radius");
                cfg.bumps.push_back({nums[0], nums[1], nums[2], nums[3], nums[4]});
            } else if (full == "quadrature.step") cfg.quadStep = std::stod(value);
            else if (full == "quadrature.tolerance") cfg.quadTolerance = std::stod(value);
            else if (full == "quadrature.max_time") cfg.quadMaxTime = std::stod(value);
            else if (full == "experiment.delta_grid")
                cfg.deltaGrid = detail::parseNumbers(value, full);
            else if (full == "experiment.samples") cfg.samples = std::stoi(value);
            else if (full == "experiment.frames") cfg.frames = std::stoi(value);
            else if (full == "experiment.seed") cfg.seed = std::stoull(value);
            else if (full == "experiment.t_grid") cfg.tGrid = detail::parseNumbers(value, full);
            else if (full == "output.directory") cfg.outDir = value;
            else if (full == "output.plots") {
                if (value == "on") cfg.plots = true;
                else if (value == "off") cfg.plots = false;
                else throw ConfigError("output.plots must be on or off");
            } else
                throw ConfigError("unknown key " + full);
        } catch (const std::invalid_argument&) {
            throw ConfigError("config line " + std::to_string(lineNo) + ": bad number for " +
                              full);
        }
    }
    if (!sawBase && cfg.bumps.empty()) cfg.bumps.push_back(BumpConfig{});
    return cfg;
}

inline Config loadConfig(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config file not found: " + path);
    return parseConfig(in);
}

inline void validateConfig(const Config& cfg, const OctagonGroup& group) {
    if (cfg.surface != "octagon-genus2")
        throw ConfigError("surface.model must be octagon-genus2");
    if (cfg.base <= 0.0) throw ConfigError("observable.base must be positive");
    double budget = 0.0;
    for (const auto& b : cfg.bumps) {
        budget += std::abs(b.amplitude);
        if (b.radius <= 0.0 || b.radius >= 0.5 * group.systole())
            throw ConfigError("bump radius must lie in (0, systole/2)");
        if (b.y <= 0.0) throw ConfigError("bump center must lie in the upper half-plane");
    }
    if (budget >= cfg.base)
        throw ConfigError("amplitude budget violates positivity of the observable");
    if (cfg.samples < 1000) throw ConfigError("experiment.samples must be at least 1000");
    if (cfg.frames < 1) throw ConfigError("experiment.frames must be positive");
    if (cfg.deltaGrid.empty()) throw ConfigError("experiment.delta_grid must be nonempty");
    for (double d : cfg.deltaGrid)
        if (d <= 0.0 || d > 0.1) throw ConfigError("delta grid entries must lie in (0, 0.1]");
    if (cfg.quadStep <= 0.0 || cfg.quadTolerance <= 0.0 || cfg.quadMaxTime < 5.0)
        throw ConfigError("bad quadrature parameters");
}

inline LabContext makeContext(const Config& cfg) {
    auto group = std::make_shared<OctagonGroup>();
    validateConfig(cfg, *group);
    std::vector<BumpSpec> bumps;
    for (const auto& b : cfg.bumps)
        bumps.push_back({frameFromCoordinates(b.x, b.y, b.theta), b.amplitude, b.radius});
    InvariantObservable psi(group, cfg.base, bumps);
    InvariantObservable cpsi = InvariantObservable::constant(group, 1.7);
    QuadratureSpec spec{cfg.quadStep, cfg.quadTolerance, cfg.quadMaxTime};
    return {group, std::move(psi), std::move(cpsi), spec, cfg.seed};
}

}  // namespace hypflow
