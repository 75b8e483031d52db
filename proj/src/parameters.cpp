#include "carbon/parameters.hpp"

#include <cmath>

#include "carbon/errors.hpp"

namespace carbon::dice {

int ModelParameters::periods() const {
    return static_cast<int>(std::lround(time_horizon_years / step_size));
}

namespace {

linalg::Mat<3> five_year_carbon_matrix(const CarbonCycleParams& c) {
    // Column-stochastic by construction: reverse flows scale with the
    // equilibrium mass ratios, so the matrix conserves total carbon.
    const double b12 = c.b_atm_to_upper;
    const double b23 = c.b_upper_to_lower;
    const double b21 = b12 * c.m_atm_eq / c.m_upper_eq;
    const double b32 = b23 * c.m_upper_eq / c.m_lower_eq;
    return {{{1.0 - b12, b21, 0.0},
             {b12, 1.0 - b21 - b23, b32},
             {0.0, b23, 1.0 - b32}}};
}

linalg::Mat<2> five_year_temperature_matrix(const ClimateParams& c) {
    const double lam = c.forcing_per_doubling / c.ecs;
    return {{{1.0 - c.c1 * lam - c.c1 * c.c3, c.c1 * c.c3},
             {c.c4, 1.0 - c.c4}}};
}

void check_positive_series(const std::vector<double>& s, const char* name,
                           std::vector<std::string>& out) {
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (!(s[i] >= 0.0) || !std::isfinite(s[i])) {
            out.push_back(std::string(name) + " becomes negative or non-finite at period " +
                          std::to_string(i));
            return;
        }
    }
}

}  // namespace

static DerivedModel build_paths(const ModelParameters& p) {
    DerivedModel d;
    d.periods = p.periods();
    d.dt = p.step_size;
    const int n = d.periods;
    const double dt = d.dt;

    d.carbon_step = linalg::fractional_power(five_year_carbon_matrix(p.carbon), dt / 5.0);
    linalg::force_column_sums(d.carbon_step, 1.0);
    d.temp_step = linalg::fractional_power(five_year_temperature_matrix(p.climate), dt / 5.0);
    d.forcing_coeff = p.climate.c1 * dt / 5.0;

    d.intensity0 = p.emissions.industrial0 /
                   (p.economy.gross_output0 * (1.0 - p.emissions.mu0));

    d.population.resize(n);
    d.tfp.resize(n);
    d.intensity.resize(n);
    d.backstop.resize(n);
    d.abatement_cost_coeff.resize(n);
    d.land_use.resize(n);
    d.forcing_nonco2.resize(n + 1);
    d.savings.resize(n);
    d.numeraire.resize(n + 1);
    d.year.resize(n);

    double pop = p.economy.population0;
    double tfp = p.economy.tfp0;
    double sigma = d.intensity0;
    double gsig = p.emissions.intensity_growth0;
    for (int i = 0; i < n; ++i) {
        const double t = i * dt;
        d.year[i] = p.start_year + t;
        d.population[i] = pop;
        d.tfp[i] = tfp;
        d.intensity[i] = sigma;
        d.backstop[i] = p.abatement.backstop_price0 *
                        std::pow(1.0 - p.abatement.backstop_decline, t / 5.0);
        d.abatement_cost_coeff[i] =
            d.backstop[i] * sigma / (p.abatement.cost_exponent * 1000.0);
        d.land_use[i] = p.emissions.land_use0 *
                        std::pow(1.0 - p.emissions.land_use_decline, t / 5.0);
        d.savings[i] = p.economy.savings_rate;

        pop = pop * std::pow(p.economy.population_asymptote / pop,
                             p.economy.population_adjust * dt / 5.0);
        const double ga = p.economy.tfp_growth0 * std::exp(-p.economy.tfp_growth_decline * t);
        tfp = tfp / std::pow(1.0 - ga, dt / 5.0);
        sigma = sigma * std::exp(gsig * dt);
        gsig = gsig * std::pow(1.0 + p.emissions.intensity_growth_decline, dt);
    }
    for (int i = 0; i <= n; ++i) {
        const double t = i * dt;
        const double ramp = p.climate.forcing_nonco2_ramp_years;
        const double frac = ramp > 0.0 ? std::min(1.0, t / ramp) : 1.0;
        d.forcing_nonco2[i] = p.climate.forcing_nonco2_initial +
                              (p.climate.forcing_nonco2_final - p.climate.forcing_nonco2_initial) * frac;
    }
    d.numeraire[0] = 1.0;
    for (int i = 0; i < n; ++i)
        d.numeraire[i + 1] = d.numeraire[i] * (1.0 + p.numeraire_rate * dt);
    return d;
}

std::vector<std::string> validate(const ModelParameters& p) {
    std::vector<std::string> v;
    if (p.time_horizon_years < 1) v.push_back("time_horizon_years must be >= 1");
    if (!(p.step_size > 0.0)) v.push_back("step_size must be > 0");
    if (!(p.numeraire_rate >= 0.0)) v.push_back("numeraire_rate must be >= 0");
    if (!(p.max_abatement > 0.0)) v.push_back("max_abatement must be > 0");
    if (!(p.economy.capital_elasticity > 0.0 && p.economy.capital_elasticity < 1.0))
        v.push_back("economy.capital_elasticity must lie in (0,1)");
    if (!(p.economy.depreciation > 0.0 && p.economy.depreciation < 1.0))
        v.push_back("economy.depreciation must lie in (0,1)");
    if (!(p.economy.savings_rate > 0.0 && p.economy.savings_rate < 1.0))
        v.push_back("economy.savings_rate must lie in (0,1)");
    if (!(p.economy.population0 > 0.0)) v.push_back("economy.population0 must be > 0");
    if (!(p.economy.capital0 > 0.0)) v.push_back("economy.capital0 must be > 0");
    if (!(p.economy.tfp0 > 0.0)) v.push_back("economy.tfp0 must be > 0");
    if (!(p.economy.gross_output0 > 0.0)) v.push_back("economy.gross_output0 must be > 0");
    if (!(p.carbon.m_atm0 > 0.0 && p.carbon.m_upper0 > 0.0 && p.carbon.m_lower0 > 0.0))
        v.push_back("carbon reservoir initial masses must be > 0");
    if (!(p.carbon.m_atm_eq > 0.0 && p.carbon.m_upper_eq > 0.0 && p.carbon.m_lower_eq > 0.0))
        v.push_back("carbon reservoir equilibrium masses must be > 0");
    if (!(p.climate.ecs > 0.0)) v.push_back("climate.ecs must be > 0");
    if (!(p.climate.forcing_per_doubling > 0.0))
        v.push_back("climate.forcing_per_doubling must be > 0");
    if (!(p.utility.elasticity >= 0.0)) v.push_back("utility.elasticity must be >= 0");
    if (!(p.utility.pure_time_preference >= 0.0))
        v.push_back("utility.pure_time_preference must be >= 0");
    if (!(p.damages.quadratic >= 0.0 && p.damages.linear >= 0.0))
        v.push_back("damage coefficients must be >= 0");
    if (!(p.abatement.backstop_price0 >= 0.0)) v.push_back("abatement.backstop_price0 must be >= 0");
    if (!(p.abatement.cost_exponent > 1.0)) v.push_back("abatement.cost_exponent must be > 1");
    if (!(p.emissions.mu0 >= 0.0 && p.emissions.mu0 <= p.max_abatement))
        v.push_back("emissions.mu0 must lie in [0, max_abatement]");
    if (!(p.emissions.mu0 < 1.0)) v.push_back("emissions.mu0 must be < 1 (pins initial intensity)");
    if (!v.empty()) return v;  // path construction needs the basics to hold

    DerivedModel d;
    try {
        d = build_paths(p);
    } catch (const Error& e) {
        v.push_back(e.what());
        return v;
    }
    // Mass conservation of the per-step carbon matrix: column sums must be
    // one so total carbon changes only by injected emissions.
    for (int j = 0; j < 3; ++j) {
        double sum = 0.0;
        for (int i = 0; i < 3; ++i) sum += d.carbon_step[i][j];
        if (std::abs(sum - 1.0) > 1e-9)
            v.push_back("carbon_cycle matrix is not mass conserving (column " +
                        std::to_string(j) + " sums to " + std::to_string(sum) + ")");
    }
    check_positive_series(d.population, "population path", v);
    check_positive_series(d.tfp, "tfp path", v);
    check_positive_series(d.intensity, "carbon intensity path", v);
    check_positive_series(d.backstop, "backstop price path", v);
    check_positive_series(d.land_use, "land-use emissions path", v);
    check_positive_series(d.savings, "savings path", v);
    for (double s : d.savings) {
        if (!(s > 0.0 && s < 1.0)) {
            v.push_back("savings path leaves (0,1)");
            break;
        }
    }
    return v;
}

DerivedModel derive(const ModelParameters& p) {
    std::vector<std::string> violations = validate(p);
    if (!violations.empty()) {
        std::string msg = "invalid model parameters:";
        for (const std::string& s : violations) msg += "\n  - " + s;
        throw ConfigError(msg);
    }
    return build_paths(p);
}

}  // namespace carbon::dice
