#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "oracles.hpp"
#include "pockets/dynamics.hpp"
#include "pockets/normal_form.hpp"

using namespace pockets;

namespace {

// The forcing has mean eps * lambda, so the 1:1 tongue is centred near
// sigma = -eps lambda + eta^2 / 2 rather than at sigma = 0.
OscillatorParams locked_1_1() {
    OscillatorParams params;
    params.eta = 0.1;
    params.eps = 0.1;
    params.sigma = -0.045;
    return params;
}

// True when the locking decision flips within `band` of sigma, i.e. the
// saddle-node is close and finite-n rotation estimates are still transient.
bool near_saddle_node(const OscillatorParams& params, double band = 1e-3) {
    const bool here = entrainment_test(params, false).entrained;
    for (double shift : {-band, band}) {
        auto moved = params;
        moved.sigma += shift;
        if (entrainment_test(moved, false).entrained != here) return true;
    }
    return false;
}

OscillatorParams random_params(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    OscillatorParams params;
    const int pq[][2] = {{1, 1}, {2, 1}, {1, 2}, {3, 1}, {3, 2}};
    const auto& pick = pq[rng() % 5];
    params.p = pick[0];
    params.q = pick[1];
    params.sigma = 0.2 * (unit(rng) - 0.5);
    params.eta = 0.2 * unit(rng);
    params.eps = 0.2 * unit(rng);
    params.forcing.lambda = unit(rng);
    params.forcing.beta = unit(rng) < 0.3 ? 0.3 : 0.0;
    if (unit(rng) < 0.3) {
        auto f = FourierSeries1::zeros(3);
        f.set(0, 0.2 * (unit(rng) - 0.5));
        f.set(1, {0.3 * unit(rng), -0.5});
        f.set(2, {0.0, 0.2 * unit(rng)});
        f.set(3, {0.1 * unit(rng), 0.1 * unit(rng)});
        params.nonlinearity = f;
    }
    return params;
}

}  // namespace

TEST_CASE("rhs") {
    OscillatorParams params;
    for (double x : {0.0, 0.3, 0.9})
        for (double y : {0.0, 0.5}) {
            const auto [dx, dy] = rhs(x, y, params);
            CHECK(dx == 1.0);
            CHECK(dy == 1.0);
        }
    params.eta = 0.1;
    CHECK(rhs(0.25, 0.0, params).first == doctest::Approx(params.omega() + 0.1).epsilon(1e-15));
    params.eta = 0.0;
    params.eps = 0.2;
    params.forcing.lambda = 1.0;
    for (double y : {0.0, 0.13, 0.5, 0.99}) CHECK(std::abs(rhs(0.0, y, params).first - (params.omega() + 0.2)) < 1e-6);
}

TEST_CASE("poincare map basics") {
    OscillatorParams params;
    params.set_omega(0.37);
    for (double x0 : {0.0, 0.2, -1.3}) CHECK(std::abs(poincare_map(x0, params) - (x0 + 0.37)) < 1e-12);
}

TEST_CASE("lift equivariance over random parameters") {
    std::mt19937_64 rng(20240611);
    for (int trial = 0; trial < 50; ++trial) {
        const auto params = random_params(rng);
        const LiftedMap map(params);
        for (int i = 0; i < 17; ++i) {
            const double x = i / 16.0 - 0.5;
            CHECK(std::abs(map(x + 1.0) - map(x) - 1.0) < 1e-9);
        }
    }
}

TEST_CASE("fast integrator agrees with an rhs-driven RK4") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 10; ++trial) {
        auto params = random_params(rng);
        params.steps_per_period = 128;
        for (double x0 : {0.0, 0.41}) CHECK(std::abs(poincare_map(x0, params) - oracle::reference_map(x0, params, 128)) < 1e-12);
    }
}

TEST_CASE("step-halving") {
    auto params = locked_1_1();
    params.sigma = 0.0;
    const double fine = oracle::reference_map(0.0, params, 512 * 16);
    CHECK(std::abs(poincare_map(0.0, params) - fine) < 1e-8);

    // Coarse steps so the defect sits well above rounding.
    params.eta = params.eps = 0.2;
    params.forcing.alpha = 20.0;
    const double ref = oracle::reference_map(0.1, params, 4096);
    params.steps_per_period = 64;
    const double e1 = std::abs(poincare_map(0.1, params) - ref);
    params.steps_per_period = 128;
    const double e2 = std::abs(poincare_map(0.1, params) - ref);
    const double ratio = e1 / e2;
    INFO("defects " << e1 << " " << e2);
    CHECK(ratio >= 12.0);
    CHECK(ratio <= 20.0);
}

TEST_CASE("rotation numbers") {
    OscillatorParams params;
    params.set_omega(0.37);
    CHECK(std::abs(rotation_number(params, 0.0, 4096) - 0.37) < 1e-6);

    params = locked_1_1();
    // Started on the fixed point the estimate is exact; from x0 = 0 the orbit
    // contracts by only ~1.6% per period, so 128 burn-in iterates leave an
    // O(0.05 / n) transient.
    const auto witness = entrainment_test(params).witness;
    REQUIRE(witness.has_value());
    CHECK(std::abs(rotation_number(params, *witness, 4096) - 1.0) < 1e-6);
    CHECK(std::abs(rotation_number(params, 0.0, 4096) - 1.0) < 1e-4);
    // at sigma = 0 the forcing mean pushes the oscillator off the plateau
    params.sigma = 0.0;
    CHECK(rotation_number(params, 0.0, 4096) > 1.0 + 1e-3);

    // far outside the tongue the forcing acts through its mean eps lambda
    params.sigma = 0.3;
    params.eta = params.eps = 0.01;
    CHECK(std::abs(rotation_number(params, 0.0, 4096) - (1.3 + 0.01 * 0.5)) < 1e-3);

    CHECK_THROWS_AS(rotation_number(params, 0.0, 100), std::invalid_argument);
}

TEST_CASE("rotation number does not depend on the start") {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    int tested = 0;
    for (int trial = 0; trial < 10; ++trial) {
        const auto params = random_params(rng);
        if (near_saddle_node(params)) continue;
        ++tested;
        // bounded by the burn-in transient, see "rotation numbers"
        CHECK(std::abs(rotation_number(params, unit(rng), 4096) - rotation_number(params, unit(rng), 4096)) < 1e-4);
    }
    CHECK(tested >= 6);
}

TEST_CASE("rotation number is monotone in omega") {
    // Inside a plateau the burn-in start point still moves with omega, so the
    // finite-n estimate can dip slightly (about 2e-7 at 4096 iterates).
    auto params = locked_1_1();
    double previous = -1.0;
    for (int i = 0; i <= 100; ++i) {
        params.set_omega(0.9 + 0.2 * i / 100.0);
        const double rho = rotation_number(params, 0.0, 4096);
        CHECK(rho >= previous - 1e-6);
        previous = rho;
    }
}

TEST_CASE("entrainment test") {
    OscillatorParams params;
    auto r = entrainment_test(params);
    CHECK(r.degenerate);
    CHECK_FALSE(r.entrained);
    CHECK(r.locking() == Locking::degenerate);

    params = locked_1_1();
    params.sigma = 0.0;
    CHECK_FALSE(entrainment_test(params).entrained);
    params.sigma = -0.045;
    r = entrainment_test(params);
    CHECK(r.entrained);
    REQUIRE(r.witness.has_value());
    const LiftedMap map(params);
    const double fixed = *r.witness;
    CHECK(std::abs(map(fixed) - fixed - 1.0) < 1e-9);
    // hyperbolic and attracting: |F'| < 1
    const double h = 1e-6;
    const double slope = (map(fixed + h) - map(fixed - h)) / (2 * h);
    CHECK(slope > 0.0);
    CHECK(slope < 1.0 - 1e-3);

    params.sigma = 0.2;
    params.eta = params.eps = 0.01;
    r = entrainment_test(params);
    CHECK_FALSE(r.entrained);
    CHECK(r.locking() == Locking::faster);
    params.sigma = -0.2;
    CHECK(entrainment_test(params).locking() == Locking::slower);
}

TEST_CASE("entrainment and rotation number agree") {
    // A locked orbit stays within one period of its periodic orbit, so
    // |rho - p/q| < 2/n. A free orbit advances by about |G|/q per iterate,
    // so the two detectors are only comparable where |G| is clearly above
    // that; cells closer to locking than that are skipped.
    constexpr int kIters = 4096;
    constexpr double kThreshold = 2.0 / kIters;
    std::mt19937_64 rng(4242);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    int locked = 0, free = 0;
    for (int trial = 0; trial < 50; ++trial) {
        auto params = random_params(rng);
        // Half the sample sits inside the predicted tongue, half anywhere near it.
        const auto b = predicted_boundaries(params, params.forcing.lambda);
        params.sigma = trial % 2 == 0 ? b.center() + 0.3 * b.width() * (unit(rng) - 0.5)
                                      : b.center() + 0.05 * (unit(rng) - 0.5);
        const auto e = entrainment_test(params, false);
        const double gap = std::min(std::abs(e.g_min), std::abs(e.g_max));
        if (!e.entrained && gap < 4.0 * params.q * kThreshold) continue;
        const double rho = rotation_number(params, 0.0, kIters);
        const double target = static_cast<double>(params.p) / params.q;
        INFO("trial " << trial << " rho " << rho << " G in [" << e.g_min << ", " << e.g_max << "]");
        CHECK(e.entrained == (std::abs(rho - target) < kThreshold));
        (e.entrained ? locked : free) += 1;
    }
    CHECK(locked >= 5);
    CHECK(free >= 5);
}

TEST_CASE("parameter validation") {
    OscillatorParams params;
    params.p = 2;
    params.q = 4;
    CHECK_THROWS_AS(params.validate(), std::invalid_argument);
    params.q = 1;
    params.eta = -1.0;
    CHECK_THROWS_AS(params.validate(), std::invalid_argument);
    params.eta = 0.0;
    params.steps_per_period = 10;
    CHECK_THROWS_AS(params.validate(), std::invalid_argument);
    params.steps_per_period = 512;
    params.nonlinearity = FourierSeries1({cplx{0, 1}, cplx{0}, cplx{0, 1}}, false);
    CHECK_THROWS_AS(params.validate(), std::invalid_argument);
}
