#pragma once

#include "carbon/parameters.hpp"
#include "carbon/trajectory.hpp"

namespace carbon::dice {

// One-period additive bump, used by the finite-difference analytics.
// d_emission enters period emissions before the carbon cycle update;
// d_consumption enters consumption after costs and investment.
struct Perturbation {
    int period = -1;  // no-op when negative
    double d_emission = 0.0;     // [GtCO2/yr]
    double d_consumption = 0.0;  // [$T/yr]
};

struct StepOutputs {
    double emission = 0.0;
    double output_gross = 0.0;
    double cost_abatement = 0.0;
    double cost_damage = 0.0;
    double consumption = 0.0;
    double utility = 0.0;
    bool consumption_floored = false;
};

struct StepResult {
    ClimateEconomyState next;
    StepOutputs outputs;
};

// Deterministic forward model. Construction derives all exogenous paths;
// the instance is immutable afterwards and safe to share across threads.
class Simulator {
public:
    explicit Simulator(const ModelParameters& params);

    const ModelParameters& params() const { return params_; }
    const DerivedModel& derived() const { return derived_; }
    int periods() const { return derived_.periods; }

    // Advances one period. consumption_floor < 0 disables the floor (used
    // while establishing the period-0 reference level).
    StepResult step(const ClimateEconomyState& state, double mu, int period,
                    const Perturbation* bump = nullptr,
                    double consumption_floor = -1.0) const;

    ClimateEconomyState initial_state() const;

    Trajectory run(const AbatementPolicy& policy) const;
    Trajectory run(const AbatementPolicy& policy, const Perturbation& bump) const;

    // Re-simulates periods [from, periods) on top of base, which must come
    // from this simulator; the shared prefix is copied, so results are
    // bit-identical to a full run with the same inputs.
    Trajectory run_resumed(const Trajectory& base, const AbatementPolicy& policy,
                           const Perturbation& bump, int from) const;

    // Same as run_resumed but returns only the welfare objective.
    double welfare_resumed(const Trajectory& base, const AbatementPolicy& policy,
                           const Perturbation& bump, int from) const;

    // N(t) for t on the time grid.
    double numeraire_at(double t_years) const;

private:
    double utility_of(double consumption, double population) const;

    ModelParameters params_;
    DerivedModel derived_;
    double consumption_floor_fraction_ = 1e-6;
};

// Discounted-utility objective V(0) of a trajectory (delta-t weighted sum).
double welfare(const Trajectory& trajectory);

double numeraire(const ModelParameters& params, double t_years);

}  // namespace carbon::dice
