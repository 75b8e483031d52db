#pragma once

#include <string>
#include <vector>

#include "carbon/linalg.hpp"

namespace carbon::dice {

// Parameter blocks follow the DICE-2016 parameterization (Nordhaus 2017 and
// the released model code). Transfer coefficients and growth/decline rates
// are stored on their native five-year basis and converted to the model step
// size when the derived paths are built.

struct CarbonCycleParams {
    double b_atm_to_upper = 0.12;   // atmosphere -> upper ocean, per 5y
    double b_upper_to_lower = 0.007;  // upper -> lower ocean, per 5y
    double m_atm_eq = 588.0;        // equilibrium masses [GtC]
    double m_upper_eq = 360.0;
    double m_lower_eq = 1720.0;
    double m_atm0 = 851.0;          // initial masses, 2015 [GtC]
    double m_upper0 = 460.0;
    double m_lower0 = 1740.0;
};

struct ClimateParams {
    double ecs = 3.1;                    // equilibrium climate sensitivity [degC / CO2 doubling]
    double forcing_per_doubling = 3.6813;  // [W/m2]
    double c1 = 0.1005;                  // atmospheric response, per 5y
    double c3 = 0.088;                   // atmosphere -> ocean heat exchange, per 5y
    double c4 = 0.025;                   // ocean uptake, per 5y
    double t_atm0 = 0.85;                // [degC vs 1900]
    double t_lower0 = 0.0068;
    double forcing_nonco2_initial = 0.5;   // [W/m2]
    double forcing_nonco2_final = 1.0;     // [W/m2], reached after the ramp
    double forcing_nonco2_ramp_years = 85.0;
};

struct EconomyParams {
    double capital0 = 223.0;            // [$T]
    double population0 = 7403.0;        // [millions]
    double population_asymptote = 11500.0;
    double population_adjust = 0.134;   // convergence exponent, per 5y
    double tfp0 = 5.115;
    double tfp_growth0 = 0.076;         // per 5y
    double tfp_growth_decline = 0.005;  // per year
    double capital_elasticity = 0.300;
    double depreciation = 0.100;        // per year
    double savings_rate = 0.2582781456953642;  // flat; long-run optimal level
    double gross_output0 = 105.5;       // [$T], pins initial carbon intensity
};

struct EmissionsParams {
    double industrial0 = 35.85;           // [GtCO2/yr], 2015
    double mu0 = 0.03;                    // initial abatement fraction
    double intensity_growth0 = -0.0152;   // per year
    double intensity_growth_decline = -0.001;  // per year
    double land_use0 = 2.6;               // [GtCO2/yr]
    double land_use_decline = 0.115;      // per 5y
};

struct DamageParams {
    double linear = 0.0;        // output fraction per degC
    double quadratic = 0.00236;
    double exponent = 2.0;
};

struct AbatementParams {
    double backstop_price0 = 550.0;   // [$/tCO2]
    double backstop_decline = 0.025;  // per 5y
    double cost_exponent = 2.6;
    bool pin_initial = true;  // hold mu(0) at emissions.mu0 during calibration
};

struct UtilityParams {
    double elasticity = 1.45;           // marginal utility of consumption
    double pure_time_preference = 0.015;  // per year
};

struct ModelParameters {
    int time_horizon_years = 500;
    double step_size = 1.0;         // years
    double numeraire_rate = 0.015;  // per year, linear compounding per step
    double max_abatement = 1.0;
    int start_year = 2015;

    CarbonCycleParams carbon;
    ClimateParams climate;
    EconomyParams economy;
    EmissionsParams emissions;
    DamageParams damages;
    AbatementParams abatement;
    UtilityParams utility;

    int periods() const;
};

// Per-step transition structures and exogenous paths, built once per model.
struct DerivedModel {
    int periods = 0;
    double dt = 1.0;
    double co2_per_carbon = 44.0 / 12.0;  // GtCO2 per GtC

    linalg::Mat<3> carbon_step{};  // per-step carbon transfer, mass conserving
    linalg::Mat<2> temp_step{};    // per-step temperature transition
    double forcing_coeff = 0.0;    // per-step forcing response into t_atm
    double intensity0 = 0.0;       // sigma(0) [GtCO2 per $T gross output]

    // All per-period series; forcing_nonco2 and numeraire carry one extra
    // entry because the climate update reads the next grid point.
    std::vector<double> population;   // [millions]
    std::vector<double> tfp;
    std::vector<double> intensity;    // sigma(t)
    std::vector<double> backstop;     // [$/tCO2]
    std::vector<double> abatement_cost_coeff;  // theta1(t), output fraction at mu = 1
    std::vector<double> land_use;     // [GtCO2/yr]
    std::vector<double> forcing_nonco2;  // [W/m2], length periods + 1
    std::vector<double> savings;
    std::vector<double> numeraire;    // N(t_i), length periods + 1, N(0) = 1
    std::vector<double> year;         // calendar year per period
};

// Checks every ModelParameters invariant; returns one message per violation.
std::vector<std::string> validate(const ModelParameters& params);

// Builds the derived model; throws ConfigError listing every violation.
DerivedModel derive(const ModelParameters& params);

}  // namespace carbon::dice
