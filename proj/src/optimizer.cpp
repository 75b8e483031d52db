#include "carbon/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "carbon/errors.hpp"
#include "carbon/parallel.hpp"

namespace carbon::optimizer {

std::vector<std::string> Settings::validate() const {
    std::vector<std::string> v;
    if (max_iterations <= 0) v.push_back("optimizer.max_iterations must be positive");
    if (!(gradient_step > 0.0)) v.push_back("optimizer.gradient_step must be positive");
    if (!(tolerance > 0.0 && tolerance < 1.0)) v.push_back("optimizer.tolerance must lie in (0,1)");
    if (!(bump_size > 0.0 && bump_size <= 1e-3))
        v.push_back("optimizer.bump_size must lie in (0, 1e-3]");
    if (threads < 0) v.push_back("optimizer.threads must be >= 0");
    return v;
}

std::vector<double> welfare_gradient(const dice::Simulator& sim,
                                     const dice::AbatementPolicy& policy, double bump_size,
                                     int threads) {
    const int n = sim.periods();
    if (policy.periods() != n)
        throw AnalyticsError("welfare_gradient: policy length does not match horizon");
    const double upper = sim.params().max_abatement;
    const dice::Trajectory base = sim.run(policy);
    std::vector<double> grad(n, 0.0);
    parallel_for(
        n,
        [&](int j) {
            const double up = std::min(policy.mu[j] + bump_size, upper);
            const double down = std::max(policy.mu[j] - bump_size, 0.0);
            if (up - down < 1e-15) return;
            dice::AbatementPolicy bumped = policy;
            try {
                bumped.mu[j] = up;
                const double v_up = sim.welfare_resumed(base, bumped, {}, j);
                bumped.mu[j] = down;
                const double v_down = sim.welfare_resumed(base, bumped, {}, j);
                grad[j] = (v_up - v_down) / (up - down);
            } catch (const SimulationError& e) {
                throw AnalyticsError("welfare_gradient: bump at period " + std::to_string(j) +
                                     " failed: " + e.what());
            }
            if (!std::isfinite(grad[j]))
                throw AnalyticsError("welfare_gradient: non-finite welfare at bumped period " +
                                     std::to_string(j));
        },
        threads);
    return grad;
}

namespace {

struct Bounds {
    double lower = 0.0;
    double upper = 1.0;
    bool pin_first = false;
    double pinned_value = 0.0;

    void project(std::vector<double>& mu) const {
        for (double& m : mu) m = std::clamp(m, lower, upper);
        if (pin_first && !mu.empty()) mu[0] = pinned_value;
    }

    bool at_lower(double m) const { return m <= lower + 1e-12; }
    bool at_upper(double m) const { return m >= upper - 1e-12; }
};

// Gradient with outward-pointing components removed at active bounds; the
// pinned coordinate never moves.
std::vector<double> projected_gradient(const std::vector<double>& mu,
                                       const std::vector<double>& grad, const Bounds& b) {
    std::vector<double> pg(grad.size(), 0.0);
    for (std::size_t j = 0; j < grad.size(); ++j) {
        if (b.pin_first && j == 0) continue;
        double g = grad[j];
        if (b.at_lower(mu[j]) && g < 0.0) g = 0.0;
        if (b.at_upper(mu[j]) && g > 0.0) g = 0.0;
        pg[j] = g;
    }
    return pg;
}

double max_norm(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

bool kkt_satisfied(const std::vector<double>& mu, const std::vector<double>& grad,
                   const Bounds& b, double tol) {
    for (std::size_t j = 0; j < grad.size(); ++j) {
        if (b.pin_first && j == 0) continue;
        if (b.at_lower(mu[j])) {
            if (grad[j] > tol) return false;  // wants to ascend into the interior
        } else if (b.at_upper(mu[j])) {
            if (grad[j] < -tol) return false;
        } else {
            if (std::abs(grad[j]) > tol) return false;
        }
    }
    return true;
}

}  // namespace

Result calibrate(const dice::Simulator& sim, const dice::AbatementPolicy& initial,
                 const Settings& settings) {
    {
        const std::vector<std::string> bad = settings.validate();
        if (!bad.empty()) {
            std::string msg = "invalid optimizer settings:";
            for (const std::string& s : bad) msg += " " + s + ";";
            throw CalibrationError(msg);
        }
    }
    const int n = sim.periods();
    if (initial.periods() != n)
        throw CalibrationError("initial policy length does not match horizon");

    Bounds bounds;
    bounds.upper = sim.params().max_abatement;
    bounds.pin_first = sim.params().abatement.pin_initial;
    bounds.pinned_value = std::clamp(sim.params().emissions.mu0, bounds.lower, bounds.upper);

    dice::AbatementPolicy pol = initial;
    bounds.project(pol.mu);

    double welfare_current;
    try {
        welfare_current = sim.run(pol).welfare;
    } catch (const SimulationError& e) {
        throw CalibrationError(std::string("initial policy does not simulate: ") + e.what());
    }

    Result out;
    out.certificate.welfare_initial = welfare_current;
    std::vector<double> grad = welfare_gradient(sim, pol, settings.bump_size, settings.threads);

    double step = settings.gradient_step;
    int it = 0;
    bool converged = false;
    for (; it < settings.max_iterations; ++it) {
        std::vector<double> pg = projected_gradient(pol.mu, grad, bounds);
        if (max_norm(pg) <= settings.tolerance) {
            converged = true;
            break;
        }
        // Flat coordinates keep their value (no drift on sub-tolerance noise).
        std::vector<double> direction = pg;
        for (double& g : direction)
            if (std::abs(g) <= settings.tolerance) g = 0.0;

        dice::AbatementPolicy trial;
        double welfare_trial = -std::numeric_limits<double>::infinity();
        bool accepted = false;
        for (int backtrack = 0; backtrack < 60; ++backtrack) {
            trial = pol;
            for (int j = 0; j < n; ++j) trial.mu[j] += step * direction[j];
            bounds.project(trial.mu);
            double predicted = 0.0;
            for (int j = 0; j < n; ++j) predicted += grad[j] * (trial.mu[j] - pol.mu[j]);
            if (predicted <= 0.0) {
                step *= 0.5;
                continue;
            }
            try {
                welfare_trial = sim.run(trial).welfare;
            } catch (const SimulationError&) {
                step *= 0.5;  // reject the trial point, shrink the step
                continue;
            }
            if (welfare_trial >= welfare_current + 1e-4 * predicted) {
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) {
            if (max_norm(pg) <= settings.tolerance) {
                converged = true;
                break;
            }
            throw CalibrationError(
                "line search failed before reaching stationarity (projected gradient " +
                std::to_string(max_norm(pg)) + ")");
        }

        std::vector<double> grad_next =
            welfare_gradient(sim, trial, settings.bump_size, settings.threads);
        // Barzilai-Borwein estimate for the next trial step.
        double ss = 0.0, sy = 0.0;
        for (int j = 0; j < n; ++j) {
            const double s = trial.mu[j] - pol.mu[j];
            const double y = grad_next[j] - grad[j];
            ss += s * s;
            sy += s * y;
        }
        step = (sy < 0.0) ? std::clamp(ss / (-sy), 1e-8, 1e4) : step * 2.0;

        if (welfare_trial < welfare_current) out.certificate.welfare_monotone = false;
        pol = trial;
        welfare_current = welfare_trial;
        grad = std::move(grad_next);
    }

    out.policy = pol;
    out.certificate.iterations = it;
    out.certificate.converged = converged;
    out.certificate.projected_gradient_norm = max_norm(projected_gradient(pol.mu, grad, bounds));
    out.certificate.welfare_final = welfare_current;
    out.certificate.kkt_ok = kkt_satisfied(pol.mu, grad, bounds, settings.tolerance);
    out.certificate.gradient = std::move(grad);
    return out;
}

}  // namespace carbon::optimizer
