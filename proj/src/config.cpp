#include "carbon/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "carbon/errors.hpp"

namespace carbon::cli {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

double parse_double(const std::string& key, const std::string& raw) {
    const std::string v = trim(raw);
    char* end = nullptr;
    const double x = std::strtod(v.c_str(), &end);
    if (end != v.c_str() + v.size() || v.empty())
        throw ConfigError("key '" + key + "': cannot parse '" + raw + "' as a number");
    return x;
}

}  // namespace

ConfigMap ConfigMap::parse_text(const std::string& text, const std::string& origin) {
    ConfigMap cfg;
    std::istringstream in(text);
    std::string line;
    std::string section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::size_t comment = line.find_first_of("#;");
        if (comment != std::string::npos) line.erase(comment);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError(origin + ":" + std::to_string(lineno) + ": malformed section header");
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": expected key = value");
        std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": empty key");
        if (!section.empty() && key.find('.') == std::string::npos) key = section + "." + key;
        cfg.values_[key] = value;
    }
    return cfg;
}

ConfigMap ConfigMap::parse_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_text(buf.str(), path.string());
}

void ConfigMap::merge(const ConfigMap& other) {
    for (const auto& [k, v] : other.values_) values_[k] = v;
}

void ConfigMap::set(const std::string& key, const std::string& value) { values_[key] = value; }

bool ConfigMap::has(const std::string& key) const { return values_.count(key) != 0; }

std::string ConfigMap::get_string(const std::string& key, const std::string& fallback) const {
    consumed_.insert(key);
    const auto it = values_.find(key);
    return it == values_.end() ? fallback : it->second;
}

double ConfigMap::get_double(const std::string& key, double fallback) const {
    consumed_.insert(key);
    const auto it = values_.find(key);
    return it == values_.end() ? fallback : parse_double(key, it->second);
}

int ConfigMap::get_int(const std::string& key, int fallback) const {
    const double x = get_double(key, static_cast<double>(fallback));
    const int i = static_cast<int>(std::lround(x));
    if (std::abs(x - i) > 1e-9)
        throw ConfigError("key '" + key + "': expected an integer");
    return i;
}

bool ConfigMap::get_bool(const std::string& key, bool fallback) const {
    consumed_.insert(key);
    const auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    std::string v = it->second;
    std::transform(v.begin(), v.end(), v.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw ConfigError("key '" + key + "': cannot parse '" + it->second + "' as a boolean");
}

std::vector<double> ConfigMap::get_double_list(const std::string& key,
                                               const std::vector<double>& fallback) const {
    consumed_.insert(key);
    const auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    std::vector<double> out;
    std::string item;
    std::istringstream in(it->second);
    while (std::getline(in, item, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        out.push_back(parse_double(key, item));
    }
    return out;
}

std::vector<std::string> ConfigMap::unconsumed_keys() const {
    std::vector<std::string> out;
    for (const auto& [k, v] : values_)
        if (!consumed_.count(k)) out.push_back(k);
    return out;
}

dice::ModelParameters parameters_from_config(const ConfigMap& cfg) {
    dice::ModelParameters p;
    p.time_horizon_years = cfg.get_int("model.time_horizon_years", p.time_horizon_years);
    p.step_size = cfg.get_double("model.step_size", p.step_size);
    p.numeraire_rate = cfg.get_double("model.numeraire_rate", p.numeraire_rate);
    p.max_abatement = cfg.get_double("model.max_abatement", p.max_abatement);
    p.start_year = cfg.get_int("model.start_year", p.start_year);

    auto& cc = p.carbon;
    cc.b_atm_to_upper = cfg.get_double("carbon_cycle.b_atm_to_upper", cc.b_atm_to_upper);
    cc.b_upper_to_lower = cfg.get_double("carbon_cycle.b_upper_to_lower", cc.b_upper_to_lower);
    cc.m_atm_eq = cfg.get_double("carbon_cycle.m_atm_eq", cc.m_atm_eq);
    cc.m_upper_eq = cfg.get_double("carbon_cycle.m_upper_eq", cc.m_upper_eq);
    cc.m_lower_eq = cfg.get_double("carbon_cycle.m_lower_eq", cc.m_lower_eq);
    cc.m_atm0 = cfg.get_double("carbon_cycle.m_atm0", cc.m_atm0);
    cc.m_upper0 = cfg.get_double("carbon_cycle.m_upper0", cc.m_upper0);
    cc.m_lower0 = cfg.get_double("carbon_cycle.m_lower0", cc.m_lower0);

    auto& cl = p.climate;
    cl.ecs = cfg.get_double("climate.ecs", cl.ecs);
    cl.forcing_per_doubling = cfg.get_double("climate.forcing_per_doubling", cl.forcing_per_doubling);
    cl.c1 = cfg.get_double("climate.c1", cl.c1);
    cl.c3 = cfg.get_double("climate.c3", cl.c3);
    cl.c4 = cfg.get_double("climate.c4", cl.c4);
    cl.t_atm0 = cfg.get_double("climate.t_atm0", cl.t_atm0);
    cl.t_lower0 = cfg.get_double("climate.t_lower0", cl.t_lower0);
    cl.forcing_nonco2_initial = cfg.get_double("climate.forcing_nonco2_initial", cl.forcing_nonco2_initial);
    cl.forcing_nonco2_final = cfg.get_double("climate.forcing_nonco2_final", cl.forcing_nonco2_final);
    cl.forcing_nonco2_ramp_years =
        cfg.get_double("climate.forcing_nonco2_ramp_years", cl.forcing_nonco2_ramp_years);

    auto& ec = p.economy;
    ec.capital0 = cfg.get_double("economy.capital0", ec.capital0);
    ec.population0 = cfg.get_double("economy.population0", ec.population0);
    ec.population_asymptote = cfg.get_double("economy.population_asymptote", ec.population_asymptote);
    ec.population_adjust = cfg.get_double("economy.population_adjust", ec.population_adjust);
    ec.tfp0 = cfg.get_double("economy.tfp0", ec.tfp0);
    ec.tfp_growth0 = cfg.get_double("economy.tfp_growth0", ec.tfp_growth0);
    ec.tfp_growth_decline = cfg.get_double("economy.tfp_growth_decline", ec.tfp_growth_decline);
    ec.capital_elasticity = cfg.get_double("economy.capital_elasticity", ec.capital_elasticity);
    ec.depreciation = cfg.get_double("economy.depreciation", ec.depreciation);
    ec.savings_rate = cfg.get_double("economy.savings_rate", ec.savings_rate);
    ec.gross_output0 = cfg.get_double("economy.gross_output0", ec.gross_output0);

    auto& em = p.emissions;
    em.industrial0 = cfg.get_double("emissions.industrial0", em.industrial0);
    em.mu0 = cfg.get_double("emissions.mu0", em.mu0);
    em.intensity_growth0 = cfg.get_double("emissions.intensity_growth0", em.intensity_growth0);
    em.intensity_growth_decline =
        cfg.get_double("emissions.intensity_growth_decline", em.intensity_growth_decline);
    em.land_use0 = cfg.get_double("emissions.land_use0", em.land_use0);
    em.land_use_decline = cfg.get_double("emissions.land_use_decline", em.land_use_decline);

    auto& dm = p.damages;
    dm.linear = cfg.get_double("damages.linear", dm.linear);
    dm.quadratic = cfg.get_double("damages.quadratic", dm.quadratic);
    dm.exponent = cfg.get_double("damages.exponent", dm.exponent);

    auto& ab = p.abatement;
    ab.backstop_price0 = cfg.get_double("abatement.backstop_price0", ab.backstop_price0);
    ab.backstop_decline = cfg.get_double("abatement.backstop_decline", ab.backstop_decline);
    ab.cost_exponent = cfg.get_double("abatement.cost_exponent", ab.cost_exponent);
    ab.pin_initial = cfg.get_bool("abatement.pin_initial", ab.pin_initial);

    auto& ut = p.utility;
    ut.elasticity = cfg.get_double("utility.elasticity", ut.elasticity);
    ut.pure_time_preference = cfg.get_double("utility.pure_time_preference", ut.pure_time_preference);
    return p;
}

ScenarioConfig load_scenario(const std::filesystem::path& path,
                             const std::vector<std::pair<std::string, std::string>>& overrides) {
    ConfigMap merged = ConfigMap::parse_file(path);

    ScenarioConfig sc;
    sc.scenario_file = path;

    // Parameter file first, scenario file second, CLI overrides last.
    const std::string param_ref = merged.get_string("scenario.parameters", "");
    if (!param_ref.empty()) {
        std::filesystem::path param_path(param_ref);
        if (param_path.is_relative()) param_path = path.parent_path() / param_path;
        sc.parameter_file = param_path;
        ConfigMap layered = ConfigMap::parse_file(param_path);
        layered.merge(merged);
        merged = std::move(layered);
    }
    for (const auto& [k, v] : overrides) merged.set(k, v);
    merged.get_string("scenario.parameters", "");  // consumed above, re-mark after merges

    sc.parameters = parameters_from_config(merged);

    const std::string policy = merged.get_string("scenario.policy", "calibrate");
    if (policy == "calibrate") {
        sc.policy_source = PolicySource::calibrate;
    } else if (policy == "load") {
        sc.policy_source = PolicySource::load;
    } else {
        throw ConfigError("scenario.policy must be 'calibrate' or 'load', got '" + policy + "'");
    }
    std::string policy_path = merged.get_string("scenario.policy_path", "");
    if (sc.policy_source == PolicySource::load) {
        if (policy_path.empty())
            throw ConfigError("scenario.policy = load requires scenario.policy_path");
        std::filesystem::path pp(policy_path);
        if (pp.is_relative()) pp = path.parent_path() / pp;
        sc.policy_path = pp;
    } else if (!policy_path.empty()) {
        throw ConfigError("scenario.policy_path is only valid with scenario.policy = load");
    }

    sc.optimizer.max_iterations = merged.get_int("optimizer.max_iterations", sc.optimizer.max_iterations);
    sc.optimizer.gradient_step = merged.get_double("optimizer.gradient_step", sc.optimizer.gradient_step);
    sc.optimizer.tolerance = merged.get_double("optimizer.tolerance", sc.optimizer.tolerance);
    sc.optimizer.bump_size = merged.get_double("optimizer.bump_size", sc.optimizer.bump_size);

    sc.run_prices = merged.get_bool("analytics.prices", sc.run_prices);
    sc.run_rates = merged.get_bool("analytics.rates", sc.run_rates);
    sc.horizons = merged.get_double_list(
        "analytics.horizons", {50, 100, 150, 200, 250, 300, 350, 400, 450, 500});
    sc.scc_bump_emission = merged.get_double("analytics.scc_bump_emission", sc.scc_bump_emission);
    sc.scc_bump_consumption =
        merged.get_double("analytics.scc_bump_consumption", sc.scc_bump_consumption);
    sc.sensitivity_bump = merged.get_double("analytics.sensitivity_bump", sc.sensitivity_bump);
    sc.threads = merged.get_int("analytics.threads", sc.threads);
    sc.optimizer.threads = sc.threads;

    std::string out_dir = merged.get_string("output.directory", "");
    if (out_dir.empty()) {
        const char* env = std::getenv("CARBONSIM_OUTPUT_DIR");
        out_dir = env != nullptr ? env : "out";
    }
    sc.output_dir = out_dir;

    sc.raw = std::move(merged);
    return sc;
}

std::vector<std::string> validate_config(const ScenarioConfig& sc) {
    std::vector<std::string> v = dice::validate(sc.parameters);
    for (const std::string& s : sc.optimizer.validate()) v.push_back(s);

    const double horizon = sc.parameters.time_horizon_years;
    double prev = 0.0;
    for (double h : sc.horizons) {
        if (h > horizon)
            v.push_back("analytics.horizons entry " + std::to_string(h) +
                        " exceeds model.time_horizon_years");
        if (h <= prev) v.push_back("analytics.horizons must be strictly increasing and positive");
        prev = h;
    }
    if (!(sc.scc_bump_emission > 0.0)) v.push_back("analytics.scc_bump_emission must be > 0");
    if (!(sc.scc_bump_consumption > 0.0)) v.push_back("analytics.scc_bump_consumption must be > 0");
    if (!(sc.sensitivity_bump > 0.0 && sc.sensitivity_bump <= 1e-3))
        v.push_back("analytics.sensitivity_bump must lie in (0, 1e-3]");
    if (sc.threads < 0) v.push_back("analytics.threads must be >= 0");

    if (sc.policy_source == PolicySource::load) {
        std::ifstream probe(sc.policy_path);
        if (!probe) v.push_back("policy file is not readable: " + sc.policy_path.string());
    }
    if (!sc.parameter_file.empty()) {
        std::ifstream probe(sc.parameter_file);
        if (!probe) v.push_back("parameter file is not readable: " + sc.parameter_file.string());
    }
    std::error_code ec;
    std::filesystem::create_directories(sc.output_dir, ec);
    if (ec) {
        v.push_back("output directory cannot be created: " + sc.output_dir.string());
    } else {
        const std::filesystem::path probe_path = sc.output_dir / ".write_probe";
        std::ofstream probe(probe_path);
        if (!probe) {
            v.push_back("output directory is not writable: " + sc.output_dir.string());
        } else {
            probe.close();
            std::filesystem::remove(probe_path, ec);
        }
    }
    for (const std::string& k : sc.raw.unconsumed_keys())
        v.push_back("unknown config key: " + k);
    return v;
}

}  // namespace carbon::cli
