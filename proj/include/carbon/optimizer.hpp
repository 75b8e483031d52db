#pragma once

#include <string>
#include <vector>

#include "carbon/simulate.hpp"

namespace carbon::optimizer {

struct Settings {
    int max_iterations = 400;
    double gradient_step = 0.5;  // initial step length; adapted as iterations go
    double tolerance = 1e-3;     // stationarity threshold on the projected gradient
    double bump_size = 1e-4;     // finite-difference bump for mu
    int threads = 0;             // 0 = hardware concurrency

    std::vector<std::string> validate() const;
};

// Stationarity certificate for a calibrated policy.
struct Certificate {
    int iterations = 0;
    bool converged = false;
    double projected_gradient_norm = 0.0;  // max-norm at the returned policy
    double welfare_initial = 0.0;
    double welfare_final = 0.0;
    bool welfare_monotone = true;  // accepted iterations never decreased welfare
    bool kkt_ok = false;           // sign conditions at active bounds
    std::vector<double> gradient;  // raw dV/dmu at the returned policy
};

struct Result {
    dice::AbatementPolicy policy;
    Certificate certificate;
};

// dV(0)/dmu(t_j) by central finite differences; bumps clipped at the box
// bounds fall back to one-sided differences.
std::vector<double> welfare_gradient(const dice::Simulator& sim,
                                     const dice::AbatementPolicy& policy, double bump_size,
                                     int threads = 0);

// Projected gradient ascent with a backtracking (Armijo) line search; the
// trial step length is seeded by a Barzilai-Borwein estimate. Coordinates
// whose gradient sits below the tolerance keep their value, and mu(0) is
// held at emissions.mu0 when abatement.pin_initial is set.
Result calibrate(const dice::Simulator& sim, const dice::AbatementPolicy& initial,
                 const Settings& settings);

}  // namespace carbon::optimizer
