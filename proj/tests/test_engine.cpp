#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>
#include <random>

#include "carbon/errors.hpp"
#include "carbon/simulate.hpp"
#include "support.hpp"

using namespace carbon;
using dice::AbatementPolicy;
using dice::ModelParameters;
using dice::Simulator;
using dice::Trajectory;

TEST_CASE("full abatement with zero land use gives zero emissions") {
    ModelParameters p = testsupport::small_params(20);
    p.emissions.land_use0 = 0.0;
    Simulator sim(p);
    const dice::StepResult r = sim.step(sim.initial_state(), 1.0, 0);
    CHECK(r.outputs.emission == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("costless world: zero damages and zero abatement give zero cost") {
    ModelParameters p = testsupport::small_params(20);
    p.damages.linear = 0.0;
    p.damages.quadratic = 0.0;
    Simulator sim(p);
    const Trajectory t = sim.run(AbatementPolicy::constant(sim.periods(), 0.0));
    for (int i = 0; i < t.periods(); ++i) {
        CHECK(t.cost_abatement[i] == 0.0);
        CHECK(t.cost_damage[i] == 0.0);
        CHECK(t.cost_total[i] == 0.0);
    }
}

TEST_CASE("period-0 emissions sit near the published level at the pinned control rate") {
    ModelParameters p;  // full default model
    Simulator sim(p);
    const dice::StepResult r = sim.step(sim.initial_state(), p.emissions.mu0, 0);
    // published initial total emissions ~39 GtCO2/yr; require within 10%
    CHECK(r.outputs.emission > 35.1);
    CHECK(r.outputs.emission < 42.9);
}

TEST_CASE("horizon of one period matches a single step") {
    ModelParameters p = testsupport::small_params(1);
    Simulator sim(p);
    REQUIRE(sim.periods() == 1);
    const Trajectory t = sim.run(AbatementPolicy::constant(1, 0.25));
    const dice::StepResult r = sim.step(sim.initial_state(), 0.25, 0);
    CHECK(t.emission[0] == r.outputs.emission);
    CHECK(t.cost_total[0] == r.outputs.cost_abatement + r.outputs.cost_damage);
    CHECK(t.state[1].capital == r.next.capital);
    CHECK(t.state[1].m_atm == r.next.m_atm);
}

TEST_CASE("doubling a flat savings rate raises the early capital path") {
    ModelParameters lo = testsupport::small_params(60);
    lo.economy.savings_rate = 0.13;
    ModelParameters hi = lo;
    hi.economy.savings_rate = 0.26;
    const AbatementPolicy mu = AbatementPolicy::constant(60, 0.1);
    const Trajectory a = Simulator(lo).run(mu);
    const Trajectory b = Simulator(hi).run(mu);
    for (int i = 1; i <= 50; ++i) CHECK(b.state[i].capital > a.state[i].capital);
}

TEST_CASE("numeraire accrues linearly per period") {
    ModelParameters p;
    CHECK(dice::numeraire(p, 0.0) == 1.0);
    CHECK(dice::numeraire(p, 1.0) == doctest::Approx(1.015).epsilon(1e-15));
    // closed-form accrual product over a century
    CHECK(dice::numeraire(p, 100.0) == doctest::Approx(4.432045649525177).epsilon(1e-12));
    CHECK_THROWS_AS(dice::numeraire(p, 0.5), AnalyticsError);
}

TEST_CASE("welfare of constant utility without discounting equals the horizon") {
    Trajectory t;
    t.dt = 1.0;
    const int n = 37;
    t.emission.assign(n, 0.0);
    t.utility.assign(n, 1.0);
    t.numeraire.assign(n, 1.0);  // r = 0
    CHECK(dice::welfare(t) == doctest::Approx(static_cast<double>(n)).epsilon(1e-14));
    t.utility.assign(n, 0.0);
    CHECK(dice::welfare(t) == 0.0);
    t.utility[3] = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(dice::welfare(t), AnalyticsError);
}

TEST_CASE("carbon is conserved at every step up to injected emissions") {
    ModelParameters p;  // default 500-year model
    Simulator sim(p);
    std::mt19937 rng(1234);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    AbatementPolicy mu;
    mu.mu.resize(sim.periods());
    for (double& m : mu.mu) m = u(rng);
    const Trajectory t = sim.run(mu);
    for (int i = 0; i < t.periods(); ++i) {
        const double before = t.state[i].total_carbon();
        const double after = t.state[i + 1].total_carbon();
        const double injected = t.emission[i] * t.dt / sim.derived().co2_per_carbon;
        CHECK(std::abs(after - before - injected) <= 1e-9 * before);
    }
}

TEST_CASE("cost decomposition holds exactly per period") {
    Simulator sim(testsupport::small_params(40));
    const Trajectory t = sim.run(AbatementPolicy::ramp(40, 1.0, 0.03, 1.0, 30.0));
    for (int i = 0; i < t.periods(); ++i)
        CHECK(t.cost_total[i] == t.cost_abatement[i] + t.cost_damage[i]);
}

TEST_CASE("trajectory numeraire starts at one and increases") {
    Simulator sim(testsupport::small_params(40));
    const Trajectory t = sim.run(AbatementPolicy::constant(40, 0.2));
    CHECK(t.numeraire[0] == 1.0);
    for (int i = 1; i < t.periods(); ++i) CHECK(t.numeraire[i] > t.numeraire[i - 1]);
}

TEST_CASE("raising abatement pointwise lowers emissions and raises abatement cost") {
    Simulator sim(testsupport::small_params(80));
    const Trajectory a = sim.run(AbatementPolicy::constant(80, 0.2));
    const Trajectory b = sim.run(AbatementPolicy::constant(80, 0.4));
    for (int i = 0; i < 80; ++i) {
        CHECK(b.emission[i] <= a.emission[i] + 1e-12);
        CHECK(b.cost_abatement[i] >= a.cost_abatement[i] - 1e-12);
        CHECK(b.emission[i] >= 0.0);
    }
}

TEST_CASE("hotter emission paths never lower the damage cost") {
    Simulator sim(testsupport::small_params(80));
    const Trajectory hot = sim.run(AbatementPolicy::constant(80, 0.0));
    const Trajectory cool = sim.run(AbatementPolicy::constant(80, 1.0));
    for (int i = 0; i < 80; ++i) {
        CHECK(hot.state[i].t_atm >= cool.state[i].t_atm - 1e-12);
        CHECK(hot.cost_damage[i] >= cool.cost_damage[i] - 1e-12);
    }
}

TEST_CASE("simulation is deterministic bit for bit") {
    ModelParameters p;
    Simulator sim(p);
    const AbatementPolicy mu = AbatementPolicy::ramp(sim.periods(), 1.0, 0.03, 1.0, 150.0);
    const Trajectory a = sim.run(mu);
    const Trajectory b = sim.run(mu);
    CHECK(std::memcmp(a.emission.data(), b.emission.data(), a.emission.size() * sizeof(double)) == 0);
    CHECK(a.welfare == b.welfare);
    // welfare stable across a fresh simulator instance as well
    const Trajectory c = Simulator(p).run(mu);
    CHECK(a.welfare == c.welfare);
}

TEST_CASE("runaway damages raise a degenerate-trajectory error naming the period") {
    ModelParameters p = testsupport::small_params(120);
    p.damages.quadratic = 0.6;  // damage fraction passes 1 as warming compounds
    Simulator sim(p);
    try {
        (void)sim.run(AbatementPolicy::constant(120, 0.0));
        FAIL("expected a SimulationError");
    } catch (const SimulationError& e) {
        CHECK(e.period() >= 0);
        CHECK(std::string(e.what()).find("period") != std::string::npos);
    }
}

TEST_CASE("contract violations are reported") {
    Simulator sim(testsupport::small_params(10));
    CHECK_THROWS_AS(sim.step(sim.initial_state(), 0.2, 10), AnalyticsError);
    CHECK_THROWS_AS(sim.step(sim.initial_state(), 1.5, 0), AnalyticsError);
    CHECK_THROWS_AS(sim.run(AbatementPolicy::constant(9, 0.2)), AnalyticsError);
}

TEST_CASE("resumed runs agree with full runs bit for bit") {
    Simulator sim(testsupport::small_params(60));
    const AbatementPolicy base_mu = AbatementPolicy::ramp(60, 1.0, 0.03, 1.0, 40.0);
    const Trajectory base = sim.run(base_mu);
    AbatementPolicy bumped = base_mu;
    bumped.mu[25] = std::min(1.0, bumped.mu[25] + 1e-4);
    const Trajectory full = sim.run(bumped);
    const Trajectory resumed = sim.run_resumed(base, bumped, {}, 25);
    CHECK(full.welfare == resumed.welfare);
    for (int i = 0; i < 60; ++i) CHECK(full.cost_damage[i] == resumed.cost_damage[i]);
    CHECK(sim.welfare_resumed(base, bumped, {}, 25) == full.welfare);
}

TEST_CASE("parameter validation flags broken settings") {
    ModelParameters p;
    p.numeraire_rate = -0.01;
    p.economy.savings_rate = 1.4;
    const std::vector<std::string> v = dice::validate(p);
    REQUIRE(!v.empty());
    bool mentions_rate = false, mentions_savings = false;
    for (const std::string& s : v) {
        if (s.find("numeraire_rate") != std::string::npos) mentions_rate = true;
        if (s.find("savings_rate") != std::string::npos) mentions_savings = true;
    }
    CHECK(mentions_rate);
    CHECK(mentions_savings);
    CHECK(dice::validate(ModelParameters{}).empty());
}
