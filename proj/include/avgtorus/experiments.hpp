#pragma once

#include "avgtorus/config.hpp"
#include "avgtorus/csv.hpp"

#include <string>

namespace avgtorus {

inline constexpr const char* kToolVersion = "avgtorus 0.1.0";

struct RunResult {
    ResultTable table;
    bool all_pass = true;
    std::string summary; // one-line outcome for stdout
};

// Dispatches the experiment named in the config. Throws ConfigError for bad
// inputs and CapExceededError when an exact mode is out of range.
RunResult run_experiment(const ExperimentConfig& cfg, int threads = 1);

// One line per experiment with its required keys.
std::string list_experiments();

} // namespace avgtorus
