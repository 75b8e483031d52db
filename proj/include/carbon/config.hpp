#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "carbon/optimizer.hpp"
#include "carbon/parameters.hpp"

namespace carbon::cli {

// Flat key = value file with [section] headers; keys are stored as
// "section.key". '#' and ';' start comments. Later assignments win, which
// is how command-line overrides are layered on top of the files.
class ConfigMap {
public:
    static ConfigMap parse_file(const std::filesystem::path& path);
    static ConfigMap parse_text(const std::string& text, const std::string& origin = "<text>");

    void merge(const ConfigMap& other);  // other wins
    void set(const std::string& key, const std::string& value);

    bool has(const std::string& key) const;
    std::string get_string(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key, double fallback) const;
    int get_int(const std::string& key, int fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;
    std::vector<double> get_double_list(const std::string& key,
                                        const std::vector<double>& fallback) const;

    // Keys read so far; anything else is reported by validate_config.
    std::vector<std::string> unconsumed_keys() const;

private:
    std::map<std::string, std::string> values_;
    mutable std::set<std::string> consumed_;
};

dice::ModelParameters parameters_from_config(const ConfigMap& cfg);

enum class PolicySource { calibrate, load };

struct ScenarioConfig {
    std::filesystem::path scenario_file;
    std::filesystem::path parameter_file;
    PolicySource policy_source = PolicySource::calibrate;
    std::filesystem::path policy_path;  // used when policy_source == load

    optimizer::Settings optimizer;

    bool run_prices = true;
    bool run_rates = true;
    std::vector<double> horizons;          // years, for the K_par(T) sweep
    double scc_bump_emission = 1.0;        // GtCO2
    double scc_bump_consumption = 0.01;    // $T
    double sensitivity_bump = 1e-4;        // mu bump for the rate analytics
    int threads = 0;

    std::filesystem::path output_dir;

    dice::ModelParameters parameters;
    ConfigMap raw;  // merged view, kept for unknown-key reporting
};

// Loads the scenario file, the parameter file it references, and applies
// "key=value" overrides (dotted section.key paths) on top.
ScenarioConfig load_scenario(const std::filesystem::path& path,
                             const std::vector<std::pair<std::string, std::string>>& overrides = {});

// Every violated invariant of the scenario and its model parameters, one
// message each; empty means the configuration is runnable.
std::vector<std::string> validate_config(const ScenarioConfig& config);

}  // namespace carbon::cli
