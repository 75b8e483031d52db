#pragma once

#include <span>
#include <vector>

#include "carbon/simulate.hpp"

namespace carbon::rates {

// Cost response to a local abatement change at period t_j, by central
// finite differences on the re-simulated trajectory.
struct CostSensitivity {
    int period = 0;
    double bump = 0.0;
    double abatement = 0.0;            // dC_A(t_j)/dmu(t_j) [$T per unit mu]
    std::vector<double> damage;        // dC_D(t_k)/dmu(t_j) for t_k >= t_j
    std::vector<double> total_cost;    // dC(t_k)/dmu(t_j)  for t_k >= t_j
};

CostSensitivity cost_sensitivities(const dice::Simulator& sim,
                                   const dice::AbatementPolicy& policy, int t_j,
                                   double bump = 1e-4);

struct IrrResult {
    double rate = 0.0;  // per year
    bool found = false;
};

struct IrrOptions {
    double bracket_low = -0.5;
    double bracket_high = 1.0;
    double widened_high = 2.0;  // one automatic widening if no sign change
    double tolerance = 1e-12;
    double truncation = 1e-8;  // repayments below this fraction of the peak count as zero
};

// Internal rate of return of the abatement loan: the unique r with
// principal + sum_k repayments[k] * exp(-r * k * dt) = 0, where
// repayments[0] sits at the principal's own period. With principal > 0 and
// repayments <= 0 the residual is strictly increasing in r.
IrrResult irr_solve(double principal, std::span<const double> repayments, double dt,
                    const IrrOptions& options = {});

struct RateReport {
    std::vector<int> periods;
    std::vector<double> r_scc;      // per year, aligned with periods
    std::vector<bool> found;        // no-root entries flagged, not fatal
    std::vector<double> abatement_sensitivity;   // dC_A(t_j)/dmu(t_j)
    std::vector<std::vector<double>> damage_sensitivities;  // rows per t_j, columns t_k >= t_j
    double discount_rate = 0.0;
    double stationarity_residual = 0.0;  // max |dV/dmu| over the requested periods
};

// r^SCC(t_j) for each requested period under the given (calibrated) policy.
RateReport r_scc_curve(const dice::Simulator& sim, const dice::AbatementPolicy& policy,
                       const std::vector<int>& periods, double bump = 1e-4, int threads = 0,
                       const IrrOptions& options = {});

// Discounted marginal-utility weights R(t_j, t_k): response of the
// discounted-utility tail from t_j to a cost change at t_k, where the cost
// change hits consumption one for one.
std::vector<double> utility_weights(const dice::Simulator& sim,
                                    const dice::AbatementPolicy& policy, int t_j,
                                    const std::vector<int>& t_k_list, double bump_cost = 0.01);

}  // namespace carbon::rates
