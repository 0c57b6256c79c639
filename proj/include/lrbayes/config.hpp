#pragma once

#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <string>

#include "common.hpp"

//! Experiment configuration: a flat key=value file (# comments, blank lines
//! ignored) overridden by command-line flags. Unknown keys are rejected so
//! typos fail loudly instead of silently running defaults.

namespace lrbayes::harness {

enum class ExperimentKind { verify, toy, kinship, scoring };

struct ExperimentConfig {
    ExperimentKind kind = ExperimentKind::verify;
    std::uint64_t seed = 1;
    std::size_t cases = 1000;
    std::string out;        //!< output path; empty means the per-kind default
    unsigned workers = 1;

    // toy experiment
    double mu = 10.0;
    double var_d = 10.0;
    double var_u = 2.0;
    double var_s = 1.0;
    std::optional<double> fixed_mu_d; //!< pin the source parameter (canned setups)
    std::string canned;               //!< named preset, applied before overrides

    // kinship experiment
    std::string freq_table; //!< empty means the bundled table
    std::size_t loci_full = 15;
    std::size_t loci_reduced = 10;

    // verify self-test hook: name of one check whose verdict is negated
    std::string corrupt_check;
};

//! Violated configuration (bad file, unknown key, unparsable value).
//! Distinct from contract_error so the CLI can map it to exit code 2.
class config_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {

inline double parse_double(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        const double v = std::stod(value, &used);
        if (used != value.size()) throw std::invalid_argument("trailing junk");
        return v;
    } catch (const std::exception&) {
        throw config_error("config: bad numeric value for " + key + ": '" + value + "'");
    }
}

inline std::uint64_t parse_u64(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        const unsigned long long v = std::stoull(value, &used);
        if (used != value.size()) throw std::invalid_argument("trailing junk");
        return v;
    } catch (const std::exception&) {
        throw config_error("config: bad unsigned value for " + key + ": '" + value + "'");
    }
}

} // namespace detail

//! Named toy-model presets: the three fixed-source setups under critique
//! and the corrected experiment that samples the source per case.
inline void apply_canned(ExperimentConfig& cfg, const std::string& name) {
    cfg.canned = name;
    if (name == "corrected") {
        cfg.fixed_mu_d.reset();
        cfg.var_s = 1.0;
    } else if (name == "neumann-case-1") {
        cfg.fixed_mu_d = 9.0;
        cfg.var_s = 1.0;
    } else if (name == "neumann-case-2") {
        cfg.fixed_mu_d = 0.0;
        cfg.var_s = 1.0;
    } else if (name == "neumann-case-3") {
        cfg.fixed_mu_d = 9.0;
        cfg.var_s = 1e-5;
    } else {
        throw config_error("config: unknown canned setup '" + name + "'");
    }
}

inline void apply_key(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
    if (key == "seed") cfg.seed = detail::parse_u64(key, value);
    else if (key == "cases") cfg.cases = static_cast<std::size_t>(detail::parse_u64(key, value));
    else if (key == "out") cfg.out = value;
    else if (key == "workers") cfg.workers = static_cast<unsigned>(detail::parse_u64(key, value));
    else if (key == "mu") cfg.mu = detail::parse_double(key, value);
    else if (key == "var_d") cfg.var_d = detail::parse_double(key, value);
    else if (key == "var_u") cfg.var_u = detail::parse_double(key, value);
    else if (key == "var_s") cfg.var_s = detail::parse_double(key, value);
    else if (key == "mu_d") cfg.fixed_mu_d = detail::parse_double(key, value);
    else if (key == "canned") apply_canned(cfg, value);
    else if (key == "freq_table") cfg.freq_table = value;
    else if (key == "loci_full") cfg.loci_full = static_cast<std::size_t>(detail::parse_u64(key, value));
    else if (key == "loci_reduced")
        cfg.loci_reduced = static_cast<std::size_t>(detail::parse_u64(key, value));
    else if (key == "corrupt_check") cfg.corrupt_check = value;
    else throw config_error("config: unknown key '" + key + "'");
}

inline void load_config_file(ExperimentConfig& cfg, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("config: cannot open " + path);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const auto first = line.find_first_not_of(" \t");
        if (first == std::string::npos || line[first] == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw config_error("config: " + path + ":" + std::to_string(line_no) +
                               ": expected key=value");
        auto trim = [](std::string s) {
            const auto b = s.find_first_not_of(" \t");
            const auto e = s.find_last_not_of(" \t");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        apply_key(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
}

inline void validate(const ExperimentConfig& cfg) {
    if (cfg.cases == 0) throw config_error("config: cases must be >= 1");
    if (cfg.workers == 0) throw config_error("config: workers must be >= 1");
    if (cfg.loci_reduced == 0 || cfg.loci_reduced > cfg.loci_full)
        throw config_error("config: need 1 <= loci_reduced <= loci_full");
}

} // namespace lrbayes::harness
