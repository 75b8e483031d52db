#pragma once

#include <vector>

#include "carbon/simulate.hpp"

namespace carbon::pricing {

// Prices are $/tCO2; cost aggregates are $T. The $T-vs-GtCO2 unit bridge is
// a factor 1000 (1 $/tCO2 = 1e-3 $T/GtCO2).

// Value of the swap exchanging accumulated costs against a constant
// time-value-adjusted price K paid on emissions, discounted to time zero;
// left-point sum over the grid up to `horizon_years`.
double gap_value(double k, const dice::Trajectory& traj, double horizon_years);

// Par price: discounted total cost divided by total emissions.
double k_par(const dice::Trajectory& traj, double horizon_years);

// Par price net of damages from past emissions: the counterfactual must be
// the same model run under full abatement, its damage cost is subtracted
// from the cost leg.
double k_par_star(const dice::Trajectory& traj, const dice::Trajectory& counterfactual,
                  double horizon_years);

// SCC(t) = -dV(0)/dE(t) / (dV(0)/dZ(t)) per period, as a positive $/tCO2
// cost, by central finite differences on the full simulation.
std::vector<double> scc_curve(const dice::Simulator& sim, const dice::AbatementPolicy& policy,
                              double bump_emission = 1.0, double bump_consumption = 0.01,
                              int threads = 0);

// Constant swap rate with the same discounted revenue as charging SCC(t)
// on emissions.
double k_scc(const std::vector<double>& scc, const dice::Trajectory& traj,
             double horizon_years);

// Per-period SCC(t)/N(t) - K_SCC.
std::vector<double> scc_deviation(const std::vector<double>& scc, double k_scc_value,
                                  const dice::Trajectory& traj);

struct HorizonPoint {
    double horizon_years = 0.0;
    double k_par = 0.0;
    double k_par_star = 0.0;
    bool defined = false;
};

// K_par(T) and K_par*(T) for each horizon; horizons must be sorted and lie
// within the trajectory. Horizons with zero total emissions come back with
// defined = false.
std::vector<HorizonPoint> horizon_sweep(const dice::Trajectory& traj,
                                        const dice::Trajectory& counterfactual,
                                        const std::vector<double>& horizons);

struct PriceReport {
    double k_par = 0.0;
    double k_par_star = 0.0;
    double k_scc = 0.0;
    double scc_initial = 0.0;
    double gap_at_zero = 0.0;  // accumulated discounted cost [$T]
    std::vector<double> scc;
    std::vector<double> deviation;  // SCC(t)/N(t) - K_SCC
    std::vector<HorizonPoint> horizon_curve;
};

PriceReport build_price_report(const dice::Simulator& sim, const dice::AbatementPolicy& policy,
                               const dice::Trajectory& traj,
                               const dice::Trajectory& counterfactual,
                               const std::vector<double>& horizons, double bump_emission = 1.0,
                               double bump_consumption = 0.01, int threads = 0);

}  // namespace carbon::pricing
