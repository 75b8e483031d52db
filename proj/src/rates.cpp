#include "carbon/rates.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "carbon/errors.hpp"
#include "carbon/parallel.hpp"

namespace carbon::rates {

CostSensitivity cost_sensitivities(const dice::Simulator& sim,
                                   const dice::AbatementPolicy& policy, int t_j, double bump) {
    const int n = sim.periods();
    if (t_j < 0 || t_j >= n)
        throw AnalyticsError("cost_sensitivities: period outside horizon");
    if (!(bump > 0.0)) throw AnalyticsError("cost_sensitivities: bump must be positive");
    if (policy.periods() != n)
        throw AnalyticsError("cost_sensitivities: policy length does not match horizon");

    const double upper = sim.params().max_abatement;
    const double up = std::min(policy.mu[t_j] + bump, upper);
    const double down = std::max(policy.mu[t_j] - bump, 0.0);
    if (up - down < 1e-15)
        throw AnalyticsError("cost_sensitivities: abatement bump collapses at period " +
                             std::to_string(t_j));

    const dice::Trajectory base = sim.run(policy);
    dice::AbatementPolicy bumped = policy;
    dice::Trajectory t_up, t_down;
    try {
        bumped.mu[t_j] = up;
        t_up = sim.run_resumed(base, bumped, {}, t_j);
        bumped.mu[t_j] = down;
        t_down = sim.run_resumed(base, bumped, {}, t_j);
    } catch (const SimulationError& e) {
        throw AnalyticsError("cost_sensitivities: simulation failed for bump at period " +
                             std::to_string(t_j) + ": " + e.what());
    }

    CostSensitivity out;
    out.period = t_j;
    out.bump = up - down;
    const double inv = 1.0 / (up - down);
    out.abatement = (t_up.cost_abatement[t_j] - t_down.cost_abatement[t_j]) * inv;
    out.damage.resize(n - t_j);
    out.total_cost.resize(n - t_j);
    for (int k = t_j; k < n; ++k) {
        out.damage[k - t_j] = (t_up.cost_damage[k] - t_down.cost_damage[k]) * inv;
        out.total_cost[k - t_j] = (t_up.cost_total[k] - t_down.cost_total[k]) * inv;
    }
    return out;
}

namespace {

double irr_residual(double rate, double principal, std::span<const double> repayments,
                    double dt) {
    double acc = principal;
    for (std::size_t k = 0; k < repayments.size(); ++k) {
        if (repayments[k] == 0.0) continue;
        // clamp the exponent so deeply negative trial rates stay finite
        const double arg = std::min(700.0, -rate * static_cast<double>(k) * dt);
        acc += repayments[k] * std::exp(arg);
    }
    return acc;
}

}  // namespace

IrrResult irr_solve(double principal, std::span<const double> repayments, double dt,
                    const IrrOptions& options) {
    if (!(principal > 0.0))
        throw AnalyticsError("irr_solve: principal must be positive");

    double peak = 0.0;
    for (double r : repayments) peak = std::max(peak, std::abs(r));
    std::vector<double> cleaned(repayments.begin(), repayments.end());
    for (double& r : cleaned)
        if (std::abs(r) < options.truncation * peak) r = 0.0;

    double lo = options.bracket_low;
    double hi = options.bracket_high;
    double f_lo = irr_residual(lo, principal, cleaned, dt);
    double f_hi = irr_residual(hi, principal, cleaned, dt);
    if (!(f_lo < 0.0) || !(f_hi > 0.0)) {
        hi = options.widened_high;  // widen once, then give up
        f_hi = irr_residual(hi, principal, cleaned, dt);
        if (!(f_lo < 0.0) || !(f_hi > 0.0)) return {};
    }
    for (int iter = 0; iter < 200 && hi - lo > options.tolerance; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (irr_residual(mid, principal, cleaned, dt) < 0.0)
            lo = mid;
        else
            hi = mid;
    }
    return {0.5 * (lo + hi), true};
}

RateReport r_scc_curve(const dice::Simulator& sim, const dice::AbatementPolicy& policy,
                       const std::vector<int>& periods, double bump, int threads,
                       const IrrOptions& options) {
    const int count = static_cast<int>(periods.size());
    RateReport report;
    report.periods = periods;
    report.r_scc.assign(count, 0.0);
    report.found.assign(count, false);
    report.abatement_sensitivity.assign(count, 0.0);
    report.damage_sensitivities.resize(count);
    report.discount_rate = sim.params().numeraire_rate;

    const double dt = sim.derived().dt;
    parallel_for(
        count,
        [&](int idx) {
            CostSensitivity sens = cost_sensitivities(sim, policy, periods[idx], bump);
            report.abatement_sensitivity[idx] = sens.abatement;
            if (sens.abatement > 0.0) {
                const IrrResult irr = irr_solve(sens.abatement, sens.damage, dt, options);
                report.r_scc[idx] = irr.rate;
                report.found[idx] = irr.found;
            }
            report.damage_sensitivities[idx] = std::move(sens.damage);
        },
        threads);

    // Stationarity residual over the requested interior periods: the IRR
    // reading of r^SCC presumes dV/dmu(t_j) ~ 0, which only applies where
    // the policy is away from its bounds.
    std::vector<double> grad(count, 0.0);
    const dice::Trajectory base = sim.run(policy);
    const double upper = sim.params().max_abatement;
    parallel_for(
        count,
        [&](int idx) {
            const int j = periods[idx];
            if (policy.mu[j] <= 1e-9 || policy.mu[j] >= upper - 1e-9) return;
            if (j == 0 && sim.params().abatement.pin_initial) return;
            const double up = std::min(policy.mu[j] + bump, upper);
            const double down = std::max(policy.mu[j] - bump, 0.0);
            if (up - down < 1e-15) return;
            dice::AbatementPolicy bumped = policy;
            bumped.mu[j] = up;
            const double v_up = sim.welfare_resumed(base, bumped, {}, j);
            bumped.mu[j] = down;
            const double v_down = sim.welfare_resumed(base, bumped, {}, j);
            grad[idx] = (v_up - v_down) / (up - down);
        },
        threads);
    double residual = 0.0;
    for (double g : grad) residual = std::max(residual, std::abs(g));
    report.stationarity_residual = residual;
    return report;
}

std::vector<double> utility_weights(const dice::Simulator& sim,
                                    const dice::AbatementPolicy& policy, int t_j,
                                    const std::vector<int>& t_k_list, double bump_cost) {
    const int n = sim.periods();
    if (t_j < 0 || t_j >= n) throw AnalyticsError("utility_weights: t_j outside horizon");
    if (!(bump_cost > 0.0)) throw AnalyticsError("utility_weights: bump must be positive");
    const dice::Trajectory base = sim.run(policy);
    std::vector<double> weights(t_k_list.size(), 0.0);
    for (std::size_t i = 0; i < t_k_list.size(); ++i) {
        const int t_k = t_k_list[i];
        if (t_k < t_j || t_k >= n)
            throw AnalyticsError("utility_weights: t_k must lie in [t_j, horizon)");
        // A +bump cost change at t_k takes consumption down by the bump; the
        // weight is the discounted-utility response of the tail from t_j,
        // which the welfare difference isolates because periods before t_k
        // are untouched.
        dice::Perturbation bump;
        bump.period = t_k;
        bump.d_consumption = -bump_cost;
        const double v_up_cost = sim.welfare_resumed(base, policy, bump, t_k);
        bump.d_consumption = bump_cost;
        const double v_down_cost = sim.welfare_resumed(base, policy, bump, t_k);
        weights[i] = (v_up_cost - v_down_cost) / (2.0 * bump_cost);
    }
    return weights;
}

}  // namespace carbon::rates
