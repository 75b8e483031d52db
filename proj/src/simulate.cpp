#include "carbon/simulate.hpp"

#include <cmath>
#include <string>

#include "carbon/errors.hpp"

namespace carbon::dice {

AbatementPolicy AbatementPolicy::constant(int periods, double value) {
    AbatementPolicy p;
    p.mu.assign(periods, value);
    return p;
}

AbatementPolicy AbatementPolicy::ramp(int periods, double dt, double mu_start, double mu_end,
                                      double ramp_years) {
    AbatementPolicy p;
    p.mu.resize(periods);
    for (int i = 0; i < periods; ++i) {
        const double t = i * dt;
        const double frac = ramp_years > 0.0 ? std::min(1.0, t / ramp_years) : 1.0;
        p.mu[i] = mu_start + (mu_end - mu_start) * frac;
    }
    return p;
}

Simulator::Simulator(const ModelParameters& params)
    : params_(params), derived_(derive(params)) {}

ClimateEconomyState Simulator::initial_state() const {
    ClimateEconomyState s;
    s.m_atm = params_.carbon.m_atm0;
    s.m_upper = params_.carbon.m_upper0;
    s.m_lower = params_.carbon.m_lower0;
    s.t_atm = params_.climate.t_atm0;
    s.t_lower = params_.climate.t_lower0;
    s.capital = params_.economy.capital0;
    return s;
}

double Simulator::utility_of(double consumption_per_capita, double population) const {
    const double eta = params_.utility.elasticity;
    double u;
    if (eta == 1.0) {
        u = std::log(consumption_per_capita);
    } else {
        u = (std::pow(consumption_per_capita, 1.0 - eta) - 1.0) / (1.0 - eta);
    }
    return population * u;
}

StepResult Simulator::step(const ClimateEconomyState& state, double mu, int period,
                           const Perturbation* bump, double consumption_floor) const {
    const int n = derived_.periods;
    if (period < 0 || period >= n)
        throw AnalyticsError("step: period " + std::to_string(period) + " outside horizon");
    if (!(mu >= -1e-12 && mu <= params_.max_abatement + 1e-12))
        throw AnalyticsError("step: abatement " + std::to_string(mu) +
                             " outside [0, max_abatement] at period " + std::to_string(period));

    const ModelParameters& p = params_;
    const DerivedModel& d = derived_;
    const double dt = d.dt;

    const double output_gross = d.tfp[period] *
                                std::pow(d.population[period] / 1000.0, 1.0 - p.economy.capital_elasticity) *
                                std::pow(state.capital, p.economy.capital_elasticity);
    const double damage_fraction = p.damages.linear * state.t_atm +
                                   p.damages.quadratic * std::pow(state.t_atm, p.damages.exponent);
    const double cost_damage = output_gross * damage_fraction;
    const double cost_abatement =
        output_gross * d.abatement_cost_coeff[period] * std::pow(mu, p.abatement.cost_exponent);

    double emission = d.intensity[period] * output_gross * (1.0 - mu) + d.land_use[period];
    if (bump && bump->period == period) emission += bump->d_emission;

    const double output_net = output_gross - cost_damage - cost_abatement;
    const double investment = d.savings[period] * output_net;
    double consumption = output_net - investment;
    if (bump && bump->period == period) consumption += bump->d_consumption;

    double cpc = 1000.0 * consumption / d.population[period];
    bool floored = false;
    if (consumption_floor >= 0.0 && cpc < consumption_floor) {
        cpc = consumption_floor;
        floored = true;
    }
    if (!(cpc > 0.0) || !std::isfinite(cpc))
        throw SimulationError("degenerate trajectory: non-positive consumption", period);

    StepResult r;
    r.outputs.emission = emission;
    r.outputs.output_gross = output_gross;
    r.outputs.cost_abatement = cost_abatement;
    r.outputs.cost_damage = cost_damage;
    r.outputs.consumption = consumption;
    r.outputs.utility = utility_of(cpc, d.population[period]);
    r.outputs.consumption_floored = floored;

    // Carbon cycle: transfer, then inject this period's emissions into the
    // atmosphere (GtCO2 -> GtC).
    const linalg::Vec<3> m =
        linalg::mat_vec(d.carbon_step, {state.m_atm, state.m_upper, state.m_lower});
    r.next.m_atm = m[0] + emission * dt / d.co2_per_carbon;
    r.next.m_upper = m[1];
    r.next.m_lower = m[2];

    const double forcing = p.climate.forcing_per_doubling *
                               std::log2(r.next.m_atm / p.carbon.m_atm_eq) +
                           d.forcing_nonco2[period + 1];
    const linalg::Vec<2> temp = linalg::mat_vec(d.temp_step, {state.t_atm, state.t_lower});
    r.next.t_atm = temp[0] + d.forcing_coeff * forcing;
    r.next.t_lower = temp[1];

    r.next.capital = std::pow(1.0 - p.economy.depreciation, dt) * state.capital + dt * investment;

    if (!std::isfinite(r.outputs.utility) || !std::isfinite(r.next.capital) ||
        !std::isfinite(r.next.m_atm) || !std::isfinite(r.next.t_atm))
        throw SimulationError("degenerate trajectory: non-finite state", period);
    if (!(r.next.m_atm > 0.0 && r.next.m_upper > 0.0 && r.next.m_lower > 0.0))
        throw SimulationError("degenerate trajectory: non-positive carbon mass", period);
    if (!(r.next.capital > 0.0))
        throw SimulationError("degenerate trajectory: non-positive capital", period);
    return r;
}

namespace {

void resize_trajectory(Trajectory& t, int n) {
    t.emission.resize(n);
    t.output_gross.resize(n);
    t.cost_abatement.resize(n);
    t.cost_damage.resize(n);
    t.cost_total.resize(n);
    t.consumption.resize(n);
    t.utility.resize(n);
    t.numeraire.resize(n);
    t.state.resize(n + 1);
    t.welfare_prefix.resize(n + 1);
}

}  // namespace

Trajectory Simulator::run_resumed(const Trajectory& base, const AbatementPolicy& policy,
                                  const Perturbation& bump, int from) const {
    const int n = derived_.periods;
    if (policy.periods() != n)
        throw AnalyticsError("policy length " + std::to_string(policy.periods()) +
                             " does not match horizon " + std::to_string(n));
    if (from < 0 || from > n) throw AnalyticsError("run_resumed: bad start period");
    if (from > 0 && base.periods() != n)
        throw AnalyticsError("run_resumed: base trajectory does not match horizon");

    Trajectory t;
    t.dt = derived_.dt;
    t.start_year = params_.start_year;
    resize_trajectory(t, n);

    double consumption_floor = -1.0;
    int floored = 0;
    if (from > 0) {
        for (int i = 0; i < from; ++i) {
            t.emission[i] = base.emission[i];
            t.output_gross[i] = base.output_gross[i];
            t.cost_abatement[i] = base.cost_abatement[i];
            t.cost_damage[i] = base.cost_damage[i];
            t.cost_total[i] = base.cost_total[i];
            t.consumption[i] = base.consumption[i];
            t.utility[i] = base.utility[i];
            t.numeraire[i] = base.numeraire[i];
            t.state[i] = base.state[i];
            t.welfare_prefix[i] = base.welfare_prefix[i];
        }
        t.state[from] = base.state[from];
        t.welfare_prefix[from] = base.welfare_prefix[from];
        consumption_floor = consumption_floor_fraction_ *
                            (1000.0 * base.consumption[0] / derived_.population[0]);
        floored = base.floored_periods;
    } else {
        t.state[0] = initial_state();
        t.welfare_prefix[0] = 0.0;
    }

    double welfare_acc = t.welfare_prefix[from];
    for (int i = from; i < n; ++i) {
        StepResult r = step(t.state[i], policy.mu[i], i, &bump, consumption_floor);
        t.emission[i] = r.outputs.emission;
        t.output_gross[i] = r.outputs.output_gross;
        t.cost_abatement[i] = r.outputs.cost_abatement;
        t.cost_damage[i] = r.outputs.cost_damage;
        t.cost_total[i] = r.outputs.cost_abatement + r.outputs.cost_damage;
        t.consumption[i] = r.outputs.consumption;
        t.utility[i] = r.outputs.utility;
        t.numeraire[i] = derived_.numeraire[i];
        t.state[i + 1] = r.next;
        if (r.outputs.consumption_floored) ++floored;
        if (floored > 1)
            throw SimulationError("degenerate trajectory: consumption floor binds repeatedly", i);
        if (i == 0)
            consumption_floor = consumption_floor_fraction_ *
                                (1000.0 * r.outputs.consumption / derived_.population[0]);
        welfare_acc += r.outputs.utility * derived_.dt / derived_.numeraire[i];
        t.welfare_prefix[i + 1] = welfare_acc;
    }
    t.welfare = welfare_acc;
    t.floored_periods = floored;
    return t;
}

double Simulator::welfare_resumed(const Trajectory& base, const AbatementPolicy& policy,
                                  const Perturbation& bump, int from) const {
    const int n = derived_.periods;
    if (policy.periods() != n)
        throw AnalyticsError("policy length " + std::to_string(policy.periods()) +
                             " does not match horizon " + std::to_string(n));
    if (from < 0 || from > n) throw AnalyticsError("welfare_resumed: bad start period");
    if (base.periods() != n)
        throw AnalyticsError("welfare_resumed: base trajectory does not match horizon");

    double consumption_floor =
        from > 0 ? consumption_floor_fraction_ *
                       (1000.0 * base.consumption[0] / derived_.population[0])
                 : -1.0;
    int floored = from > 0 ? base.floored_periods : 0;
    ClimateEconomyState state = from > 0 ? base.state[from] : initial_state();
    double welfare_acc = base.welfare_prefix[from];
    for (int i = from; i < n; ++i) {
        StepResult r = step(state, policy.mu[i], i, &bump, consumption_floor);
        if (r.outputs.consumption_floored && ++floored > 1)
            throw SimulationError("degenerate trajectory: consumption floor binds repeatedly", i);
        if (i == 0)
            consumption_floor = consumption_floor_fraction_ *
                                (1000.0 * r.outputs.consumption / derived_.population[0]);
        welfare_acc += r.outputs.utility * derived_.dt / derived_.numeraire[i];
        state = r.next;
    }
    return welfare_acc;
}

Trajectory Simulator::run(const AbatementPolicy& policy, const Perturbation& bump) const {
    Trajectory empty;
    return run_resumed(empty, policy, bump, 0);
}

Trajectory Simulator::run(const AbatementPolicy& policy) const {
    return run(policy, Perturbation{});
}

double Simulator::numeraire_at(double t_years) const {
    return numeraire(params_, t_years);
}

double numeraire(const ModelParameters& params, double t_years) {
    const double dt = params.step_size;
    const long i = std::lround(t_years / dt);
    if (std::abs(i * dt - t_years) > 1e-9 * std::max(1.0, std::abs(t_years)) || i < 0)
        throw AnalyticsError("numeraire: time " + std::to_string(t_years) + " is not on the grid");
    double n = 1.0;
    for (long k = 0; k < i; ++k) n *= 1.0 + params.numeraire_rate * dt;
    return n;
}

double welfare(const Trajectory& t) {
    double acc = 0.0;
    for (int i = 0; i < t.periods(); ++i) {
        if (!std::isfinite(t.utility[i]))
            throw AnalyticsError("welfare: non-finite utility at period " + std::to_string(i));
        acc += t.utility[i] * t.dt / t.numeraire[i];
    }
    return acc;
}

}  // namespace carbon::dice
