#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "carbon/errors.hpp"
#include "carbon/optimizer.hpp"
#include "carbon/pricing.hpp"
#include "support.hpp"

using namespace carbon;
using dice::AbatementPolicy;
using dice::ModelParameters;
using dice::Simulator;
using dice::Trajectory;

TEST_CASE("gap value at zero price is the accumulated discounted cost") {
    std::mt19937 rng(7);
    const Trajectory t = testsupport::random_trajectory(rng, 80);
    double expected = 0.0;
    for (int i = 0; i < 80; ++i) expected += t.cost_total[i] / t.numeraire[i] * t.dt;
    CHECK(pricing::gap_value(0.0, t, 80.0) == doctest::Approx(expected).epsilon(1e-12));
    CHECK(pricing::gap_value(0.0, t, 80.0) > 0.0);
}

TEST_CASE("pure receive leg is strictly negative") {
    std::mt19937 rng(8);
    Trajectory t = testsupport::random_trajectory(rng, 50);
    for (int i = 0; i < 50; ++i) {
        t.cost_abatement[i] = t.cost_damage[i] = t.cost_total[i] = 0.0;
    }
    CHECK(pricing::gap_value(25.0, t, 50.0) < 0.0);
    CHECK(pricing::k_par(t, 50.0) == doctest::Approx(0.0));
}

TEST_CASE("par identity holds on randomized trajectories") {
    std::mt19937 rng(99);
    for (int trial = 0; trial < 25; ++trial) {
        const Trajectory t = testsupport::random_trajectory(rng, 60, 0.002 + 0.01 * trial);
        const double k = pricing::k_par(t, 60.0);
        const double scale = std::abs(pricing::gap_value(0.0, t, 60.0));
        CHECK(std::abs(pricing::gap_value(k, t, 60.0)) <= 1e-9 * scale);
    }
}

TEST_CASE("gap value decreases strictly in the price") {
    std::mt19937 rng(100);
    const Trajectory t = testsupport::random_trajectory(rng, 40);
    double prev = pricing::gap_value(0.0, t, 40.0);
    for (double k = 10.0; k <= 100.0; k += 10.0) {
        const double g = pricing::gap_value(k, t, 40.0);
        CHECK(g < prev);
        prev = g;
    }
}

TEST_CASE("closed-form par price matches a root-found price") {
    std::mt19937 rng(41);
    const Trajectory t = testsupport::random_trajectory(rng, 70);
    const double k_closed = pricing::k_par(t, 70.0);
    double lo = 0.0, hi = 2.0 * k_closed + 1.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (pricing::gap_value(mid, t, 70.0) > 0.0)
            lo = mid;
        else
            hi = mid;
    }
    CHECK(0.5 * (lo + hi) == doctest::Approx(k_closed).epsilon(1e-9));
}

TEST_CASE("scaling all costs scales the par price") {
    std::mt19937 rng(11);
    Trajectory t = testsupport::random_trajectory(rng, 60);
    const double base = pricing::k_par(t, 60.0);
    const double lambda = 3.7;
    for (int i = 0; i < 60; ++i) {
        t.cost_abatement[i] *= lambda;
        t.cost_damage[i] *= lambda;
        t.cost_total[i] *= lambda;
    }
    CHECK(pricing::k_par(t, 60.0) == doctest::Approx(lambda * base).epsilon(1e-12));
}

TEST_CASE("steeper numeraire lowers the par price when costs are back-loaded") {
    // two periods: emissions up front, all cost at the end
    auto make = [](double rate) {
        Trajectory t;
        t.dt = 1.0;
        t.emission = {10.0, 1.0};
        t.cost_abatement = {0.0, 0.0};
        t.cost_damage = {0.0, 10.0};
        t.cost_total = {0.0, 10.0};
        t.numeraire = {1.0, 1.0 + rate};
        t.utility = {0.0, 0.0};
        t.consumption = {1.0, 1.0};
        t.output_gross = {1.0, 1.0};
        t.state.resize(3);
        t.welfare_prefix.assign(3, 0.0);
        return t;
    };
    CHECK(pricing::k_par(make(0.05), 2.0) < pricing::k_par(make(0.0), 2.0));
}

TEST_CASE("zero total emissions leave the price undefined") {
    std::mt19937 rng(12);
    Trajectory t = testsupport::random_trajectory(rng, 30);
    for (int i = 0; i < 30; ++i) t.emission[i] = 0.0;
    CHECK_THROWS_AS(pricing::k_par(t, 30.0), AnalyticsError);
}

TEST_CASE("counterfactual damages cancel out when there is nothing to inherit") {
    // no initial anomaly, no land use, no exogenous forcing: the full
    // abatement counterfactual emits nothing, so its damages are zero and
    // the starred price equals the plain one
    ModelParameters p = testsupport::small_params(50);
    p.carbon.m_atm0 = p.carbon.m_atm_eq;
    p.carbon.m_upper0 = p.carbon.m_upper_eq;
    p.carbon.m_lower0 = p.carbon.m_lower_eq;
    p.climate.t_atm0 = 0.0;
    p.climate.t_lower0 = 0.0;
    p.climate.forcing_nonco2_initial = 0.0;
    p.climate.forcing_nonco2_final = 0.0;
    p.emissions.land_use0 = 0.0;
    Simulator sim(p);
    const Trajectory main = sim.run(AbatementPolicy::constant(50, 0.2));
    const Trajectory cf = sim.run(AbatementPolicy::constant(50, 1.0));
    for (int i = 0; i < 50; ++i) CHECK(cf.cost_damage[i] <= 1e-9);
    CHECK(pricing::k_par_star(main, cf, 50.0) ==
          doctest::Approx(pricing::k_par(main, 50.0)).epsilon(1e-9));
}

TEST_CASE("a counterfactual matching the main damages leaves the abatement-only price") {
    std::mt19937 rng(13);
    const Trajectory t = testsupport::random_trajectory(rng, 40);
    const double starred = pricing::k_par_star(t, t, 40.0);
    double abatement_cost = 0.0, emissions = 0.0;
    for (int i = 0; i < 40; ++i) {
        abatement_cost += t.cost_abatement[i] / t.numeraire[i] * t.dt;
        emissions += t.emission[i] * t.dt;
    }
    CHECK(starred == doctest::Approx(1000.0 * abatement_cost / emissions).epsilon(1e-12));
}

TEST_CASE("mismatched grids are rejected") {
    std::mt19937 rng(14);
    const Trajectory a = testsupport::random_trajectory(rng, 40);
    const Trajectory b = testsupport::random_trajectory(rng, 41);
    CHECK_THROWS_AS(pricing::k_par_star(a, b, 40.0), AnalyticsError);
}

TEST_CASE("scc curve vanishes in a damage-free world") {
    ModelParameters p = testsupport::small_params(50);
    p.damages.linear = 0.0;
    p.damages.quadratic = 0.0;
    Simulator sim(p);
    const std::vector<double> scc =
        pricing::scc_curve(sim, AbatementPolicy::constant(50, 0.1));
    for (double s : scc) CHECK(std::abs(s) < 1e-6);
}

TEST_CASE("halving the scc bumps moves the curve by less than two percent") {
    ModelParameters p = testsupport::small_params(120);
    Simulator sim(p);
    const AbatementPolicy mu = AbatementPolicy::ramp(120, 1.0, 0.03, 1.0, 150.0);
    const std::vector<double> a = pricing::scc_curve(sim, mu, 1.0, 0.01);
    const std::vector<double> b = pricing::scc_curve(sim, mu, 0.5, 0.005);
    for (int t : {0, 10, 40, 80, 119})
        CHECK(std::abs(b[t] - a[t]) <= 0.02 * std::abs(a[t]));
}

TEST_CASE("k_scc recovers a constant discounted price exactly") {
    std::mt19937 rng(15);
    Trajectory t = testsupport::random_trajectory(rng, 60);
    const double c = 42.5;
    std::vector<double> scc(60);
    for (int i = 0; i < 60; ++i) scc[i] = c * t.numeraire[i];
    CHECK(pricing::k_scc(scc, t, 60.0) == doctest::Approx(c).epsilon(1e-12));

    // linearity in the curve
    const double k1 = pricing::k_scc(scc, t, 60.0);
    for (double& s : scc) s *= 2.5;
    CHECK(pricing::k_scc(scc, t, 60.0) == doctest::Approx(2.5 * k1).epsilon(1e-12));
}

TEST_CASE("k_scc stays between the discounted curve extremes") {
    std::mt19937 rng(16);
    std::uniform_real_distribution<double> u(5.0, 250.0);
    for (int trial = 0; trial < 10; ++trial) {
        const Trajectory t = testsupport::random_trajectory(rng, 50);
        std::vector<double> scc(50);
        for (double& s : scc) s = u(rng);
        double lo = 1e300, hi = -1e300;
        for (int i = 0; i < 50; ++i) {
            lo = std::min(lo, scc[i] / t.numeraire[i]);
            hi = std::max(hi, scc[i] / t.numeraire[i]);
        }
        const double k = pricing::k_scc(scc, t, 50.0);
        CHECK(k >= lo - 1e-12);
        CHECK(k <= hi + 1e-12);
    }
}

TEST_CASE("deviation integrates to zero with emission weights") {
    std::mt19937 rng(17);
    const Trajectory t = testsupport::random_trajectory(rng, 70);
    std::vector<double> scc(70);
    std::uniform_real_distribution<double> u(1.0, 300.0);
    for (double& s : scc) s = u(rng);
    const double k = pricing::k_scc(scc, t, 70.0);
    const std::vector<double> dev = pricing::scc_deviation(scc, k, t);
    double integral = 0.0, scale = 0.0;
    for (int i = 0; i < 70; ++i) {
        integral += dev[i] * t.emission[i] * t.dt;
        scale += std::abs(k) * t.emission[i] * t.dt;
    }
    CHECK(std::abs(integral) <= 1e-9 * scale);
}

TEST_CASE("zero scc curve gives zero deviation") {
    std::mt19937 rng(18);
    const Trajectory t = testsupport::random_trajectory(rng, 30);
    const std::vector<double> scc(30, 0.0);
    const double k = pricing::k_scc(scc, t, 30.0);
    CHECK(k == 0.0);
    for (double d : pricing::scc_deviation(scc, k, t)) CHECK(d == 0.0);
}

TEST_CASE("horizon sweep matches the single-period closed form") {
    std::mt19937 rng(19);
    const Trajectory t = testsupport::random_trajectory(rng, 20);
    const std::vector<pricing::HorizonPoint> sweep = pricing::horizon_sweep(t, t, {1.0, 20.0});
    REQUIRE(sweep.size() == 2);
    CHECK(sweep[0].defined);
    const double expected = 1000.0 * (t.cost_total[0] * t.dt / t.numeraire[0]) /
                            (t.emission[0] * t.dt);
    CHECK(sweep[0].k_par == doctest::Approx(expected).epsilon(1e-12));
    CHECK_THROWS_AS(pricing::horizon_sweep(t, t, {20.0, 10.0}), AnalyticsError);
}

TEST_CASE("scc curve is identical across thread counts") {
    ModelParameters p = testsupport::small_params(90);
    Simulator sim(p);
    const AbatementPolicy mu = AbatementPolicy::ramp(90, 1.0, 0.03, 1.0, 60.0);
    const std::vector<double> serial = pricing::scc_curve(sim, mu, 1.0, 0.01, 1);
    const std::vector<double> parallel = pricing::scc_curve(sim, mu, 1.0, 0.01, 4);
    REQUIRE(serial.size() == parallel.size());
    for (std::size_t i = 0; i < serial.size(); ++i) CHECK(serial[i] == parallel[i]);
}

TEST_CASE("decay preconditions over the default horizon") {
    // The par price distributes all cost to all emissions, which needs both
    // series to have died away by the end of the horizon.
    ModelParameters p;  // full 500-year model
    Simulator sim(p);
    optimizer::Settings settings;
    const optimizer::Result cal = optimizer::calibrate(
        sim, AbatementPolicy::ramp(sim.periods(), 1.0, 0.03, 1.0, 150.0), settings);
    REQUIRE(cal.certificate.converged);
    const Trajectory t = sim.run(cal.policy);
    double peak_e = 0.0, peak_c = 0.0;
    for (int i = 0; i < t.periods(); ++i) {
        peak_e = std::max(peak_e, t.emission[i]);
        peak_c = std::max(peak_c, t.cost_total[i] / t.numeraire[i]);
    }
    const double tail_e = t.emission[t.periods() - 1] / peak_e;
    const double tail_c =
        t.cost_total[t.periods() - 1] / t.numeraire[t.periods() - 1] / peak_c;
    CHECK_MESSAGE(tail_e < 0.01, "terminal emission / peak = ", tail_e);
    CHECK_MESSAGE(tail_c < 0.01, "terminal discounted cost / peak = ", tail_c);
}

TEST_CASE("zero-emission horizons become gaps in the sweep") {
    std::mt19937 rng(20);
    Trajectory t = testsupport::random_trajectory(rng, 30);
    for (int i = 0; i < 10; ++i) t.emission[i] = 0.0;
    Trajectory cf = t;
    const std::vector<pricing::HorizonPoint> sweep =
        pricing::horizon_sweep(t, cf, {5.0, 30.0});
    REQUIRE(sweep.size() == 2);
    CHECK(!sweep[0].defined);
    CHECK(sweep[1].defined);
}
