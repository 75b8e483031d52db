#include "carbon/pricing.hpp"

#include <cmath>
#include <string>

#include "carbon/errors.hpp"
#include "carbon/parallel.hpp"

namespace carbon::pricing {

namespace {

constexpr double dollars_per_tco2_to_teradollars_per_gtco2 = 1e-3;

int horizon_periods(const dice::Trajectory& traj, double horizon_years) {
    const int h = static_cast<int>(std::lround(horizon_years / traj.dt));
    if (h < 1 || h > traj.periods())
        throw AnalyticsError("horizon " + std::to_string(horizon_years) +
                             " years is outside the trajectory");
    return h;
}

double discounted_cost_sum(const dice::Trajectory& traj, int h) {
    double acc = 0.0;
    for (int i = 0; i < h; ++i) acc += traj.cost_total[i] / traj.numeraire[i] * traj.dt;
    return acc;
}

double emission_sum(const dice::Trajectory& traj, int h) {
    double acc = 0.0;
    for (int i = 0; i < h; ++i) acc += traj.emission[i] * traj.dt;
    return acc;
}

void check_same_grid(const dice::Trajectory& a, const dice::Trajectory& b) {
    if (a.periods() != b.periods() || a.dt != b.dt)
        throw AnalyticsError("trajectories are on different grids");
}

}  // namespace

double gap_value(double k, const dice::Trajectory& traj, double horizon_years) {
    const int h = horizon_periods(traj, horizon_years);
    return discounted_cost_sum(traj, h) -
           k * dollars_per_tco2_to_teradollars_per_gtco2 * emission_sum(traj, h);
}

double k_par(const dice::Trajectory& traj, double horizon_years) {
    const int h = horizon_periods(traj, horizon_years);
    const double emissions = emission_sum(traj, h);
    if (!(emissions > 0.0))
        throw AnalyticsError("k_par undefined: total emissions are zero over the horizon");
    return discounted_cost_sum(traj, h) / emissions / dollars_per_tco2_to_teradollars_per_gtco2;
}

double k_par_star(const dice::Trajectory& traj, const dice::Trajectory& counterfactual,
                  double horizon_years) {
    check_same_grid(traj, counterfactual);
    const int h = horizon_periods(traj, horizon_years);
    const double emissions = emission_sum(traj, h);
    if (!(emissions > 0.0))
        throw AnalyticsError("k_par_star undefined: total emissions are zero over the horizon");
    double cost = 0.0;
    for (int i = 0; i < h; ++i)
        cost += (traj.cost_total[i] - counterfactual.cost_damage[i]) / traj.numeraire[i] * traj.dt;
    return cost / emissions / dollars_per_tco2_to_teradollars_per_gtco2;
}

std::vector<double> scc_curve(const dice::Simulator& sim, const dice::AbatementPolicy& policy,
                              double bump_emission, double bump_consumption, int threads) {
    if (!(bump_emission > 0.0) || !(bump_consumption > 0.0))
        throw AnalyticsError("scc_curve: bump sizes must be positive");
    const int n = sim.periods();
    const dice::Trajectory base = sim.run(policy);
    std::vector<double> scc(n, 0.0);
    parallel_for(
        n,
        [&](int t) {
            dice::Perturbation bump;
            bump.period = t;
            bump.d_emission = bump_emission;
            const double v_e_up = sim.welfare_resumed(base, policy, bump, t);
            bump.d_emission = -bump_emission;
            const double v_e_down = sim.welfare_resumed(base, policy, bump, t);
            bump.d_emission = 0.0;
            bump.d_consumption = bump_consumption;
            const double v_z_up = sim.welfare_resumed(base, policy, bump, t);
            bump.d_consumption = -bump_consumption;
            const double v_z_down = sim.welfare_resumed(base, policy, bump, t);

            const double dv_de = (v_e_up - v_e_down) / (2.0 * bump_emission);
            const double dv_dz = (v_z_up - v_z_down) / (2.0 * bump_consumption);
            if (!(dv_dz > 0.0))
                throw AnalyticsError(
                    "scc_curve: marginal utility of consumption is not positive at period " +
                    std::to_string(t));
            // utils/GtCO2 over utils/$T gives $T/GtCO2; report $/tCO2.
            scc[t] = -(dv_de / dv_dz) / dollars_per_tco2_to_teradollars_per_gtco2;
        },
        threads);
    return scc;
}

double k_scc(const std::vector<double>& scc, const dice::Trajectory& traj,
             double horizon_years) {
    const int h = horizon_periods(traj, horizon_years);
    if (static_cast<int>(scc.size()) < h)
        throw AnalyticsError("k_scc: SCC curve shorter than the horizon");
    const double emissions = emission_sum(traj, h);
    if (!(emissions > 0.0))
        throw AnalyticsError("k_scc undefined: total emissions are zero over the horizon");
    double revenue = 0.0;  // SCC-weighted discounted emissions
    for (int i = 0; i < h; ++i)
        revenue += scc[i] * traj.emission[i] / traj.numeraire[i] * traj.dt;
    return revenue / emissions;
}

std::vector<double> scc_deviation(const std::vector<double>& scc, double k_scc_value,
                                  const dice::Trajectory& traj) {
    if (scc.size() != static_cast<std::size_t>(traj.periods()))
        throw AnalyticsError("scc_deviation: grids do not match");
    std::vector<double> dev(scc.size());
    for (std::size_t i = 0; i < scc.size(); ++i)
        dev[i] = scc[i] / traj.numeraire[i] - k_scc_value;
    return dev;
}

std::vector<HorizonPoint> horizon_sweep(const dice::Trajectory& traj,
                                        const dice::Trajectory& counterfactual,
                                        const std::vector<double>& horizons) {
    check_same_grid(traj, counterfactual);
    std::vector<HorizonPoint> out;
    out.reserve(horizons.size());
    double previous = -1.0;
    for (double h : horizons) {
        if (h <= previous) throw AnalyticsError("horizon list must be strictly increasing");
        previous = h;
        HorizonPoint p;
        p.horizon_years = h;
        try {
            p.k_par = k_par(traj, h);
            p.k_par_star = k_par_star(traj, counterfactual, h);
            p.defined = true;
        } catch (const AnalyticsError&) {
            p.defined = false;  // zero-emission horizon stays a gap in the output
        }
        out.push_back(p);
    }
    return out;
}

PriceReport build_price_report(const dice::Simulator& sim, const dice::AbatementPolicy& policy,
                               const dice::Trajectory& traj,
                               const dice::Trajectory& counterfactual,
                               const std::vector<double>& horizons, double bump_emission,
                               double bump_consumption, int threads) {
    const double horizon = sim.periods() * sim.derived().dt;
    PriceReport r;
    r.k_par = k_par(traj, horizon);
    r.k_par_star = k_par_star(traj, counterfactual, horizon);
    r.gap_at_zero = gap_value(0.0, traj, horizon);
    r.scc = scc_curve(sim, policy, bump_emission, bump_consumption, threads);
    r.scc_initial = r.scc.empty() ? 0.0 : r.scc.front();
    r.k_scc = k_scc(r.scc, traj, horizon);
    r.deviation = scc_deviation(r.scc, r.k_scc, traj);
    r.horizon_curve = horizon_sweep(traj, counterfactual, horizons);
    return r;
}

}  // namespace carbon::pricing
