#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace avgtorus {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Parsed `key = value` experiment configuration. Unknown keys are rejected
// with the offending line number.
struct ExperimentConfig {
    std::string experiment;
    int dim = 1;
    std::vector<int> sides;      // one entry except for the multi-N experiments
    std::optional<int> particles;
    double t_start = 0.0;
    double t_stop = 0.0;
    double t_step = 0.0;
    std::vector<double> t_list;  // overrides the range when nonempty
    double a_start = 0.0;
    double a_stop = 0.0;
    double a_step = 0.0;
    double p = 2.0;
    int64_t replicas = 10000;
    uint64_t seed = 1;
    std::optional<double> tol;
    std::string out_path; // optional CSV destination
    double g_amp = 0.0;   // hydrodynamic initial density 1 + amp cos(2 pi freq u1)
    int g_freq = 1;
    std::string psi = "one"; // test function: "one" or "cos"
    int psi_freq = 1;
    std::vector<std::string> echo; // original non-comment lines, for provenance

    int side() const; // single-N accessor, throws on lists
    std::vector<double> time_grid() const;
    std::vector<double> a_grid() const;
};

ExperimentConfig parse_config(const std::string& text);
ExperimentConfig parse_config_file(const std::string& path);

} // namespace avgtorus
