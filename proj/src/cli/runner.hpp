#pragma once

#include <string>
#include <utility>
#include <vector>

#include "cli/config.hpp"

namespace kqm::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitNumeric = 1;
inline constexpr int kExitConfig = 2;

struct RunOptions {
    std::string out_dir;  // empty: [output] directory
    bool quiet = false;
};

struct RunResult {
    int exit_code = kExitOk;
    std::string message;
    std::string out_dir;
    std::vector<std::pair<std::string, double>> metrics;  // insertion order
    std::vector<std::string> files;                       // written, relative to out_dir

    bool has(const std::string& key) const;
    double metric(const std::string& key) const;  // NaN when absent
};

// Runs one experiment and writes its artifacts. Never throws for config or
// numeric problems; they end up in exit_code and message.
RunResult run(const ScenarioConfig& cfg, const RunOptions& opt = {});

std::string code_version();

}  // namespace kqm::cli
