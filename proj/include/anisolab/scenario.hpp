#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "anisolab/config.hpp"

namespace aniso {

struct RunOptions {
    std::string out_dir;  // empty: keep outputs in memory only
    std::uint64_t seed = 0;
    bool seed_overridden = false;  // CLI --seed beats the config value
    int threads = 1;
    bool deterministic = false;
    bool gate = false;  // verdict failures escalate to exit code 4
};

struct Verdict {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct RunReport {
    std::string subcommand;
    std::string config_hash;  // fingerprint of the resolved config text
    std::string resolved_config;
    std::string json;  // full report document
    std::vector<std::pair<std::string, std::string>> files;  // filename -> content
    std::vector<std::pair<std::string, std::string>> plots;  // table name -> column text
    std::vector<Verdict> verdicts;
    bool all_passed = true;
};

// Known subcommands: spectrum, determinant, norm, ly-check, lyapunov,
// pathology, probe-indicator. Throws ConfigError for anything else or for
// invalid configuration; NumericError propagates from the pipelines.
RunReport run_scenario(const std::string& subcommand, const ParsedConfig& cfg,
                       const RunOptions& opts);

// Writes report.json, resolved_config.toml, and every table file.
void persist_report(const RunReport& report, const std::string& out_dir);

// Column text of one named numeric table; ConfigError when absent.
std::string export_plot_data(const RunReport& report, const std::string& which);

}  // namespace aniso
