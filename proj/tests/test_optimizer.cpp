#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "carbon/errors.hpp"
#include "carbon/optimizer.hpp"
#include "support.hpp"

using namespace carbon;
using dice::AbatementPolicy;
using dice::ModelParameters;
using dice::Simulator;

namespace {

optimizer::Settings fast_settings() {
    optimizer::Settings s;
    s.max_iterations = 300;
    s.tolerance = 1e-3;
    s.bump_size = 1e-4;
    return s;
}

}  // namespace

TEST_CASE("no damages means no abatement") {
    ModelParameters p = testsupport::small_params(40);
    p.damages.linear = 0.0;
    p.damages.quadratic = 0.0;
    p.abatement.pin_initial = false;
    Simulator sim(p);
    const AbatementPolicy init = AbatementPolicy::constant(40, 0.3);
    optimizer::Result r = optimizer::calibrate(sim, init, fast_settings());
    CHECK(r.certificate.converged);
    for (double m : r.policy.mu) CHECK(m == doctest::Approx(0.0).epsilon(1e-12));
    // lower bound is active with an inward-pointing (negative) gradient
    for (double g : r.certificate.gradient) CHECK(g <= fast_settings().tolerance);
}

TEST_CASE("scaled-up damages with a cheap backstop drive abatement to the cap") {
    ModelParameters p = testsupport::small_params(40);
    p.damages.quadratic = 0.00236 * 20.0;
    p.abatement.backstop_price0 = 40.0;
    p.abatement.pin_initial = false;
    Simulator sim(p);
    optimizer::Result r =
        optimizer::calibrate(sim, AbatementPolicy::constant(40, 0.2), fast_settings());
    CHECK(r.certificate.converged);
    CHECK(r.certificate.kkt_ok);
    for (int i = 0; i < 25; ++i) {
        CHECK(r.policy.mu[i] == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(r.certificate.gradient[i] >= -fast_settings().tolerance);
    }
}

TEST_CASE("welfare gradient is near zero at a calibrated optimum") {
    ModelParameters p = testsupport::small_params(50);
    p.abatement.pin_initial = false;
    Simulator sim(p);
    optimizer::Result r =
        optimizer::calibrate(sim, AbatementPolicy::constant(50, 0.1), fast_settings());
    REQUIRE(r.certificate.converged);
    const std::vector<double> g = optimizer::welfare_gradient(sim, r.policy, 1e-4);
    for (std::size_t j = 0; j < g.size(); ++j) {
        const double m = r.policy.mu[j];
        if (m > 1e-9 && m < 1.0 - 1e-9) CHECK(std::abs(g[j]) <= 2e-3);
    }
}

TEST_CASE("abating helps early when damages are on and abatement is absent") {
    ModelParameters p = testsupport::small_params(60);
    Simulator sim(p);
    const std::vector<double> g =
        optimizer::welfare_gradient(sim, AbatementPolicy::constant(60, 0.0), 1e-4);
    for (int j = 1; j < 10; ++j) CHECK(g[j] > 0.0);
}

TEST_CASE("halving the bump barely moves interior gradient entries") {
    ModelParameters p = testsupport::small_params(60);
    Simulator sim(p);
    const AbatementPolicy mu = AbatementPolicy::constant(60, 0.35);
    const std::vector<double> g1 = optimizer::welfare_gradient(sim, mu, 1e-4);
    const std::vector<double> g2 = optimizer::welfare_gradient(sim, mu, 5e-5);
    double peak = 0.0;
    for (double g : g1) peak = std::max(peak, std::abs(g));
    for (std::size_t j = 0; j < g1.size(); ++j) {
        if (std::abs(g1[j]) < 1e-8 * peak) continue;  // below the noise floor
        CHECK(std::abs(g2[j] - g1[j]) <= 0.05 * std::abs(g1[j]));
    }
}

TEST_CASE("calibration improves welfare monotonically and respects the box") {
    ModelParameters p = testsupport::small_params(60);
    Simulator sim(p);
    optimizer::Result r = optimizer::calibrate(
        sim, AbatementPolicy::ramp(60, 1.0, 0.03, 1.0, 40.0), fast_settings());
    CHECK(r.certificate.welfare_monotone);
    CHECK(r.certificate.welfare_final >= r.certificate.welfare_initial);
    for (double m : r.policy.mu) {
        CHECK(m >= 0.0);
        CHECK(m <= p.max_abatement);
    }
    CHECK(r.policy.mu[0] == p.emissions.mu0);  // pinned initial control rate
}

TEST_CASE("calibration is deterministic") {
    ModelParameters p = testsupport::small_params(50);
    Simulator sim(p);
    const AbatementPolicy init = AbatementPolicy::constant(50, 0.15);
    optimizer::Result a = optimizer::calibrate(sim, init, fast_settings());
    optimizer::Result b = optimizer::calibrate(sim, init, fast_settings());
    REQUIRE(a.policy.periods() == b.policy.periods());
    for (int i = 0; i < a.policy.periods(); ++i) CHECK(a.policy.mu[i] == b.policy.mu[i]);
    CHECK(a.certificate.welfare_final == b.certificate.welfare_final);
}

TEST_CASE("settings invariants are enforced") {
    optimizer::Settings s = fast_settings();
    s.bump_size = 5e-3;  // above the 1e-3 cap
    CHECK(!s.validate().empty());
    s = fast_settings();
    s.tolerance = 1.5;
    CHECK(!s.validate().empty());
    Simulator sim(testsupport::small_params(10));
    CHECK_THROWS_AS(optimizer::calibrate(sim, AbatementPolicy::constant(10, 0.1), s),
                    CalibrationError);
}

TEST_CASE("default model calibrates to an interior policy rising to the cap") {
    ModelParameters p = testsupport::small_params(300);
    Simulator sim(p);
    optimizer::Result r = optimizer::calibrate(
        sim, AbatementPolicy::ramp(300, 1.0, 0.03, 1.0, 150.0), fast_settings());
    REQUIRE(r.certificate.converged);
    // interior early, rising toward the cap
    CHECK(r.policy.mu[1] > 0.02);
    CHECK(r.policy.mu[1] < 0.9);
    CHECK(r.policy.mu[40] > r.policy.mu[1]);
    CHECK(r.policy.mu[80] > r.policy.mu[40]);
    int capped = 0;
    for (double m : r.policy.mu)
        if (m >= 1.0 - 1e-9) ++capped;
    CHECK(capped > 0);
}
