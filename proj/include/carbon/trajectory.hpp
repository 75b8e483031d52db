#pragma once

#include <vector>

namespace carbon::dice {

struct ClimateEconomyState {
    double m_atm = 0.0;    // [GtC]
    double m_upper = 0.0;
    double m_lower = 0.0;
    double t_atm = 0.0;    // [degC vs 1900]
    double t_lower = 0.0;
    double capital = 0.0;  // [$T]

    double total_carbon() const { return m_atm + m_upper + m_lower; }
};

struct AbatementPolicy {
    std::vector<double> mu;  // abatement fraction per period

    int periods() const { return static_cast<int>(mu.size()); }

    static AbatementPolicy constant(int periods, double value);
    // Linear ramp from mu_start to mu_end over ramp_years, then flat.
    static AbatementPolicy ramp(int periods, double dt, double mu_start, double mu_end,
                                double ramp_years);
};

// Per-period series on the model grid, plus the state path. state has one
// extra entry (the terminal state); numeraire is aligned to the period grid.
struct Trajectory {
    double dt = 1.0;
    int start_year = 2015;

    std::vector<double> emission;        // E [GtCO2/yr]
    std::vector<double> output_gross;    // Y [$T/yr]
    std::vector<double> cost_abatement;  // C_A [$T/yr]
    std::vector<double> cost_damage;     // C_D [$T/yr]
    std::vector<double> cost_total;      // C = C_A + C_D [$T/yr]
    std::vector<double> consumption;     // Z [$T/yr]
    std::vector<double> utility;         // U [utils/yr]
    std::vector<double> numeraire;       // N(t_i), N(0) = 1
    std::vector<ClimateEconomyState> state;

    // welfare_prefix[i] is the discounted-utility sum over periods < i,
    // accumulated in simulation order; welfare == welfare_prefix[periods].
    std::vector<double> welfare_prefix;
    double welfare = 0.0;
    int floored_periods = 0;  // periods where the consumption floor bound

    int periods() const { return static_cast<int>(emission.size()); }
    double year(int i) const { return start_year + i * dt; }
};

}  // namespace carbon::dice
