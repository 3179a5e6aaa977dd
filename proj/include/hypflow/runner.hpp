#pragma once

#include <filesystem>
#include <iostream>
#include <optional>

#include "hypflow/config.hpp"
#include "hypflow/report_io.hpp"

// CLI orchestration: one suite per subcommand, CSV (and optional SVG)
// artifacts per suite, a PASS/FAIL line per check, exit 0/1/2 semantics.

namespace hypflow {

struct CliOptions {
    std::string command;
    std::optional<std::string> configPath;
    std::optional<std::string> outDir;
    std::optional<std::uint64_t> seed;
    std::optional<double> tolerance;
    std::optional<bool> plots;
};

inline const std::vector<std::string>& knownCommands() {
    static const std::vector<std::string> cmds = {
        "verify-quadrilateral", "verify-cross-ratio", "verify-busemann",
        "verify-parry",         "verify-main-theorem", "mean-zero",
        "stokes",               "cb-check",            "mixing",
        "density",              "all"};
    return cmds;
}

inline ExperimentReport runSuite(const std::string& command, const Config& cfg,
                                 const LabContext& ctx) {
    if (command == "verify-quadrilateral") return verifyQuadrilateral(ctx.seed);
    if (command == "verify-cross-ratio") return verifyCrossRatioSpectrum(ctx.seed);
    if (command == "verify-busemann") return verifyBusemann(ctx.seed);
    if (command == "verify-parry") return verifyParry(ctx);
    if (command == "verify-main-theorem")
        return verifyMainTheorem(ctx.psi, cfg.deltaGrid, cfg.frames, cfg.samples, ctx.seed,
                                 ctx.spec);
    if (command == "mean-zero") {
        ExperimentReport all;
        all.name = "mean-zero";
        all.columns = {"delta", "tau_mean", "tau_stderr"};
        for (double d : {0.1, 0.05}) {
            ExperimentReport one = meanZeroCheck(ctx.psi, d, cfg.samples, ctx.seed, ctx.spec);
            all.rows.insert(all.rows.end(), one.rows.begin(), one.rows.end());
            all.checks.insert(all.checks.end(), one.checks.begin(), one.checks.end());
        }
        return all;
    }
    if (command == "stokes") {
        MeanEstimate mean = estimateMean(ctx.psi, cfg.samples, ctx.seed);
        return verifyStokes(ctx, mean.mean);
    }
    if (command == "cb-check") {
        MeanEstimate mean = estimateMean(ctx.psi, cfg.samples, ctx.seed);
        return verifyCB(ctx, mean.mean);
    }
    if (command == "mixing")
        return mixingProbe(ctx.psi, ctx.psi, ctx.psi, cfg.tGrid, cfg.samples, ctx.seed);
    if (command == "density")
        return densityProbe(*ctx.group, {0.0, 2.0, 4.0, 8.0}, 2000, ctx.seed);
    throw ConfigError("unknown command: " + command);
}

inline int runCli(const CliOptions& opts, std::ostream& out, std::ostream& err) {
    Config cfg;
    try {
        if (opts.configPath) cfg = loadConfig(*opts.configPath);
        if (opts.outDir) cfg.outDir = *opts.outDir;
        if (opts.seed) cfg.seed = *opts.seed;
        if (opts.plots) cfg.plots = *opts.plots;

        bool known = false;
        for (const auto& c : knownCommands()) known = known || c == opts.command;
        if (!known) {
            err << "unknown command: " << opts.command << "\n";
            return 2;
        }

        LabContext ctx = makeContext(cfg);
        if (opts.tolerance) ctx.spec.tailTolerance = *opts.tolerance;

        std::vector<std::string> toRun;
        if (opts.command == "all") {
            toRun = knownCommands();
            toRun.pop_back();  // drop "all"
        } else {
            toRun = {opts.command};
        }

        std::filesystem::create_directories(cfg.outDir);
        bool allPass = true;
        for (const std::string& cmd : toRun) {
            ExperimentReport rep = runSuite(cmd, cfg, ctx);
            writeFile(cfg.outDir + "/" + cmd + ".csv", reportCsv(rep));
            if (cfg.plots) writeFile(cfg.outDir + "/" + cmd + ".svg", reportSvg(rep));
            for (const Check& c : rep.checks) {
                out << (c.pass ? "[PASS] " : "[FAIL] ") << rep.name << ": " << c.name
                    << " (value " << formatDouble(c.value) << ", threshold "
                    << formatDouble(c.threshold) << ")\n";
                allPass = allPass && c.pass;
            }
        }
        return allPass ? 0 : 1;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return 2;
    }
}

inline int cliMain(int argc, char** argv, std::ostream& out, std::ostream& err) {
    auto usage = [&]() {
        err << "usage: hypflow <command> [--config PATH] [--out DIR] [--seed U64] "
               "[--tol FLOAT] [--plots on|off]\ncommands:";
        for (const auto& c : knownCommands()) err << " " << c;
        err << "\n";
        return 2;
    };
    if (argc < 2) return usage();
    CliOptions opts;
    opts.command = argv[1];
    for (int i = 2; i < argc; ++i) {
        std::string flag = argv[i];
        auto next = [&]() -> const char* {
            if (i + 1 >= argc) return nullptr;
            return argv[++i];
        };
        try {
            if (flag == "--config") {
                const char* v = next();
                if (!v) return usage();
                opts.configPath = v;
            } else if (flag == "--out") {
                const char* v = next();
                if (!v) return usage();
                opts.outDir = v;
            } else if (flag == "--seed") {
                const char* v = next();
                if (!v) return usage();
                opts.seed = std::stoull(v);
            } else if (flag == "--tol") {
                const char* v = next();
                if (!v) return usage();
                opts.tolerance = std::stod(v);
            } else if (flag == "--plots") {
                const char* v = next();
                if (!v) return usage();
                std::string s = v;
                if (s != "on" && s != "off") return usage();
                opts.plots = s == "on";
            } else {
                return usage();
            }
        } catch (const std::exception&) {
            return usage();
        }
    }
    return runCli(opts, out, err);
}

}  // namespace hypflow
