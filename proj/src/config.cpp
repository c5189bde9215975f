#include "avgtorus/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace avgtorus {

namespace {

const std::set<std::string> kExperiments = {
    "heatflow",      "avg-moments",  "renewal",     "local-smoothness",
    "concentration", "gradient",     "l2-bound",    "limit-profile",
    "hydrodynamic",  "splitting-tv", "cutoff-curve"};

// experiments that accept a comma list for N
const std::set<std::string> kMultiN = {"limit-profile", "hydrodynamic"};

const std::set<std::string> kNeedK = {"splitting-tv", "cutoff-curve"};

std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

[[noreturn]] void fail(int line, const std::string& msg) {
    throw ConfigError("config line " + std::to_string(line) + ": " + msg);
}

double parse_real(const std::string& v, int line) {
    try {
        size_t pos = 0;
        double x = std::stod(v, &pos);
        if (pos != v.size()) fail(line, "trailing characters after number '" + v + "'");
        return x;
    } catch (const ConfigError&) {
        throw;
    } catch (...) {
        fail(line, "expected a number, got '" + v + "'");
    }
}

long parse_int(const std::string& v, int line) {
    double x = parse_real(v, line);
    if (x != std::floor(x)) fail(line, "expected an integer, got '" + v + "'");
    return static_cast<long>(x);
}

std::vector<std::string> split_commas(const std::string& v) {
    std::vector<std::string> parts;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) parts.push_back(trim(item));
    return parts;
}

} // namespace

int ExperimentConfig::side() const {
    if (sides.size() != 1)
        throw ConfigError("experiment '" + experiment + "' requires a single N");
    return sides[0];
}

std::vector<double> ExperimentConfig::time_grid() const {
    if (!t_list.empty()) return t_list;
    std::vector<double> out;
    if (t_step <= 0.0) throw ConfigError("time grid: t_step must be positive");
    if (t_stop < t_start) throw ConfigError("time grid: t_stop before t_start");
    auto n = static_cast<long>(std::floor((t_stop - t_start) / t_step + 1e-9));
    for (long k = 0; k <= n; ++k) out.push_back(t_start + t_step * static_cast<double>(k));
    return out;
}

std::vector<double> ExperimentConfig::a_grid() const {
    std::vector<double> out;
    if (a_step <= 0.0) throw ConfigError("a grid: a_step must be positive");
    if (a_stop < a_start) throw ConfigError("a grid: a_stop before a_start");
    auto n = static_cast<long>(std::floor((a_stop - a_start) / a_step + 1e-9));
    for (long k = 0; k <= n; ++k) out.push_back(a_start + a_step * static_cast<double>(k));
    return out;
}

ExperimentConfig parse_config(const std::string& text) {
    ExperimentConfig cfg;
    std::set<std::string> seen;
    bool has_t_range = false, has_a_range = false;

    std::stringstream ss(text);
    std::string raw;
    int line = 0;
    while (std::getline(ss, raw)) {
        ++line;
        std::string s = trim(raw);
        if (s.empty() || s[0] == '#') continue;
        auto eq = s.find('=');
        if (eq == std::string::npos) fail(line, "expected 'key = value'");
        std::string key = trim(s.substr(0, eq));
        std::string val = trim(s.substr(eq + 1));
        if (key.empty()) fail(line, "empty key");
        if (val.empty()) fail(line, "empty value for '" + key + "'");
        if (!seen.insert(key).second) fail(line, "duplicate key '" + key + "'");
        cfg.echo.push_back(key + " = " + val);

        if (key == "experiment") {
            if (!kExperiments.count(val)) fail(line, "unknown experiment '" + val + "'");
            cfg.experiment = val;
        } else if (key == "d") {
            long d = parse_int(val, line);
            if (d < 1) fail(line, "d must be >= 1");
            cfg.dim = static_cast<int>(d);
        } else if (key == "N") {
            for (const auto& part : split_commas(val)) {
                long n = parse_int(part, line);
                if (n < 3) fail(line, "N below minimum 3");
                cfg.sides.push_back(static_cast<int>(n));
            }
        } else if (key == "k") {
            long k = parse_int(val, line);
            if (k < 1) fail(line, "k must be >= 1");
            cfg.particles = static_cast<int>(k);
        } else if (key == "t_start") {
            cfg.t_start = parse_real(val, line);
            has_t_range = true;
        } else if (key == "t_stop") {
            cfg.t_stop = parse_real(val, line);
            has_t_range = true;
        } else if (key == "t_step") {
            cfg.t_step = parse_real(val, line);
            if (cfg.t_step <= 0.0) fail(line, "t_step must be positive");
            has_t_range = true;
        } else if (key == "t_list") {
            for (const auto& part : split_commas(val))
                cfg.t_list.push_back(parse_real(part, line));
            if (!std::is_sorted(cfg.t_list.begin(), cfg.t_list.end()))
                fail(line, "t_list must be ascending");
        } else if (key == "a_start") {
            cfg.a_start = parse_real(val, line);
            has_a_range = true;
        } else if (key == "a_stop") {
            cfg.a_stop = parse_real(val, line);
            has_a_range = true;
        } else if (key == "a_step") {
            cfg.a_step = parse_real(val, line);
            has_a_range = true;
        } else if (key == "p") {
            cfg.p = parse_real(val, line);
            if (!(cfg.p >= 1.0 && cfg.p <= 2.0)) fail(line, "p outside [1,2]");
        } else if (key == "replicas") {
            long r = parse_int(val, line);
            if (r < 0) fail(line, "replicas must be >= 0");
            cfg.replicas = r;
        } else if (key == "seed") {
            cfg.seed = static_cast<uint64_t>(parse_int(val, line));
        } else if (key == "tol") {
            double t = parse_real(val, line);
            if (!(t > 0.0)) fail(line, "tol must be positive");
            cfg.tol = t;
        } else if (key == "out") {
            cfg.out_path = val;
        } else if (key == "g_amp") {
            cfg.g_amp = parse_real(val, line);
            if (std::abs(cfg.g_amp) >= 1.0) fail(line, "g_amp must keep the density positive");
        } else if (key == "g_freq") {
            cfg.g_freq = static_cast<int>(parse_int(val, line));
        } else if (key == "psi") {
            if (val != "one" && val != "cos") fail(line, "psi must be 'one' or 'cos'");
            cfg.psi = val;
        } else if (key == "psi_freq") {
            cfg.psi_freq = static_cast<int>(parse_int(val, line));
        } else {
            fail(line, "unknown key '" + key + "'");
        }
    }

    if (cfg.experiment.empty()) throw ConfigError("config: missing required key 'experiment'");
    if (cfg.sides.empty()) throw ConfigError("config: missing required key 'N'");
    if (cfg.sides.size() > 1 && !kMultiN.count(cfg.experiment))
        throw ConfigError("config: experiment '" + cfg.experiment + "' takes a single N");
    if (kNeedK.count(cfg.experiment) && !cfg.particles)
        throw ConfigError("config: experiment '" + cfg.experiment + "' requires k");
    if (cfg.experiment == "cutoff-curve" && !has_a_range)
        throw ConfigError("config: cutoff-curve requires a_start/a_stop/a_step");
    (void)has_t_range;
    return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

} // namespace avgtorus
