#pragma once

#include <random>
#include <vector>

#include "carbon/parameters.hpp"
#include "carbon/simulate.hpp"
#include "carbon/trajectory.hpp"

namespace testsupport {

// Default DICE-2016 parameters cut down to a short horizon.
inline carbon::dice::ModelParameters small_params(int horizon_years = 60) {
    carbon::dice::ModelParameters p;
    p.time_horizon_years = horizon_years;
    return p;
}

// Synthetic trajectory with the fields the pricing operations read
// (costs, emissions, numeraire); grids and decomposition are consistent.
inline carbon::dice::Trajectory random_trajectory(std::mt19937& rng, int periods,
                                                  double rate = 0.015, double dt = 1.0) {
    std::uniform_real_distribution<double> cost(0.0, 6.0);
    std::uniform_real_distribution<double> emission(0.1, 50.0);
    carbon::dice::Trajectory t;
    t.dt = dt;
    t.emission.resize(periods);
    t.cost_abatement.resize(periods);
    t.cost_damage.resize(periods);
    t.cost_total.resize(periods);
    t.consumption.assign(periods, 50.0);
    t.utility.assign(periods, 1.0);
    t.output_gross.assign(periods, 100.0);
    t.numeraire.resize(periods);
    t.state.resize(periods + 1);
    t.welfare_prefix.assign(periods + 1, 0.0);
    double n = 1.0;
    for (int i = 0; i < periods; ++i) {
        t.emission[i] = emission(rng);
        t.cost_abatement[i] = cost(rng);
        t.cost_damage[i] = cost(rng);
        t.cost_total[i] = t.cost_abatement[i] + t.cost_damage[i];
        t.numeraire[i] = n;
        n *= 1.0 + rate * dt;
    }
    return t;
}

}  // namespace testsupport
