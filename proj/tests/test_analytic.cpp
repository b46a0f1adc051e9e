#include <doctest.h>

#include <cmath>
#include <random>

#include "dva/analytic.hpp"
#include "dva/errors.hpp"
#include "dva/mc_oracle.hpp"
#include "support.hpp"

using namespace dva;

namespace {

double nu(const Diffusion& d) { return d.r - d.gamma - 0.5 * d.sigma * d.sigma; }

// E[exp(-r T) 1{S_T > K}] by integrating the lognormal density.
double digital_call_by_quadrature(double s, double k, const Diffusion& d, double t) {
    const double m = std::log(s) + nu(d) * t;
    const double sd = d.sigma * std::sqrt(t);
    const auto pdf = [&](double x) {
        return std::exp(-0.5 * (x - m) * (x - m) / (sd * sd)) / (sd * std::sqrt(2.0 * std::numbers::pi));
    };
    return std::exp(-d.r * t) * testing::simpson(pdf, std::log(k), m + 12.0 * sd, 20000);
}

double touch_by_quadrature(double s, double b, const Diffusion& d, double t, double rate) {
    const auto f = [&](double u) {
        return std::exp(-rate * u) * testing::first_passage_density(s, b, nu(d), d.sigma, u);
    };
    return testing::simpson(f, 0.0, t, 40000);
}

}  // namespace

TEST_CASE("digital call matches direct integration of the terminal density") {
    const Diffusion d{0.05, 0.01, 0.3};
    for (double k : {60.0, 100.0, 140.0}) {
        CHECK(digital_call(100.0, k, d, 2.0) == doctest::Approx(digital_call_by_quadrature(100.0, k, d, 2.0)).epsilon(1e-8));
    }
}

TEST_CASE("digitals at zero maturity are indicators") {
    const Diffusion d{0.05, 0.0, 0.2};
    CHECK(digital_call(100.0, 90.0, d, 0.0) == 1.0);
    CHECK(digital_call(100.0, 110.0, d, 0.0) == 0.0);
    CHECK(digital_call(100.0, 110.0, d, 0.0) + digital_put(100.0, 110.0, d, 0.0) == 1.0);
}

TEST_CASE("one-touch matches the discounted first-passage density") {
    const Diffusion d{0.05, 0.02, 0.35};
    for (double b : {50.0, 80.0}) {
        for (double t : {1.0, 5.0}) {
            CHECK(one_touch(100.0, b, d, t) == doctest::Approx(touch_by_quadrature(100.0, b, d, t, d.r)).epsilon(1e-7));
            CHECK(touch_probability(100.0, b, d, t) ==
                  doctest::Approx(touch_by_quadrature(100.0, b, d, t, 0.0)).epsilon(1e-7));
        }
    }
}

TEST_CASE("one-touch boundary cases") {
    const Diffusion d{0.05, 0.0, 0.2};
    CHECK(one_touch(100.0, 100.0, d, 1.0) == 1.0);
    CHECK(one_touch(100.0, 80.0, d, 0.0) == 0.0);
    CHECK(one_touch(100.0, 1e-12, d, 1.0) == doctest::Approx(0.0));
    CHECK_THROWS_AS(one_touch(100.0, 120.0, d, 1.0), ValidationError);
    CHECK_THROWS_AS(one_touch(100.0, 80.0, Diffusion{0.05, 0.0, 0.0}, 1.0), ValidationError);
}

TEST_CASE("no-touch rebate equals discounted survival of the barrier") {
    const Diffusion d{0.04, 0.01, 0.5};
    const double s = 100.0;
    const double b = 70.0;
    const double t = 3.0;
    const double expected = 2.5 * std::exp(-d.r * t) * (1.0 - touch_by_quadrature(s, b, d, t, 0.0));
    CHECK(rebate_no_hit(s, b, d, t, 2.5) == doctest::Approx(expected).epsilon(1e-7));
    CHECK(rebate_no_hit(s, b, d, t, 0.0) == 0.0);
    CHECK(rebate_no_hit(s, b, d, 0.0, 1.0) == 1.0);
}

TEST_CASE("transposed no-touch arrangement does not price the claim") {
    const Diffusion d{0.05, 0.0, 0.3};
    const double correct = rebate_no_hit(100.0, 80.0, d, 5.0, 1.0);
    const double transposed = rebate_no_hit_transposed(100.0, 80.0, d, 5.0, 1.0);
    CHECK(std::abs(correct - transposed) > 0.05);

    SimulationConfig sim;
    sim.n_paths = 200000;
    sim.params.r = d.r;
    sim.params.sigma = d.sigma;
    const auto mc = price_claim(NoTouchRebateClaim{80.0, 1.0}, sim, 5.0);
    CHECK(std::abs(mc.estimate - correct) < 3.0 * mc.std_error);
    CHECK(std::abs(mc.estimate - transposed) > 20.0 * mc.std_error);
}

TEST_CASE("parity and decomposition on random inputs") {
    std::mt19937_64 gen(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 200; ++i) {
        const Diffusion d{0.1 * u(gen), 0.05 * u(gen), 0.05 + 0.95 * u(gen)};
        const double s = 50.0 + 150.0 * u(gen);
        const double b = s * (0.2 + 0.79 * u(gen));
        const double t = 0.01 + 30.0 * u(gen);
        const double df = std::exp(-d.r * t);
        CHECK(digital_call(s, b, d, t) + digital_put(s, b, d, t) == doctest::Approx(df).epsilon(1e-12));
        CHECK(one_touch_at_expiry(s, b, d, t) + rebate_no_hit(s, b, d, t, 1.0) == doctest::Approx(df).epsilon(1e-8));
        CHECK(one_touch_at_expiry(s, b, d, t) == doctest::Approx(df * touch_probability(s, b, d, t)).epsilon(1e-8));
        CHECK(one_touch(s, b, d, t) >= one_touch_at_expiry(s, b, d, t) - 1e-15);
    }
}

TEST_CASE("horizon cap") {
    CHECK(horizon_cap(0.0) == 200.0);
    CHECK(horizon_cap(0.05) == 200.0);
    CHECK(horizon_cap(0.1) == doctest::Approx(std::log(1e6) / 0.1));
}

TEST_CASE("default-weighted integral of a constant") {
    const double got = default_weighted_integral([](double) { return 1.0; }, 0.05, 200.0);
    CHECK(got == doctest::Approx(1.0 - std::exp(-10.0)).epsilon(1e-10));
    CHECK(default_weighted_integral([](double) { return 1.0; }, 0.0, 200.0) == 0.0);
}

// Frozen Monte Carlo references, 10^6 paths each. The digital comes from exact terminal
// sampling (numpy, seed 20070630); the barrier claims from the bridge-corrected oracle (seed 424242).
TEST_CASE("at-the-money digital against a frozen Monte Carlo value") {
    const Diffusion d{0.05, 0.0, 0.2};
    constexpr double mc = 0.5320483003;
    constexpr double se = 0.0004722550;
    CHECK(std::abs(digital_call(100.0, 100.0, d, 1.0) - mc) < 3.0 * se);
    CHECK(std::abs(digital_put(100.0, 100.0, d, 1.0) - (std::exp(-0.05) - mc)) < 3.0 * se);
}

TEST_CASE("barrier claims against frozen Monte Carlo values") {
    const Diffusion d{0.05, 0.0, 0.3};
    CHECK(std::abs(one_touch(100.0, 80.0, d, 1.0) - 0.4419444658) < 3.0 * 0.0004871173);
    CHECK(std::abs(rebate_no_hit(100.0, 80.0, d, 1.0, 1.0) - 0.5216894119) < 3.0 * 0.0004733780);
}

TEST_CASE("default-weighted discount factor") {
    const double got = default_weighted_integral([](double s) { return std::exp(-0.05 * s); }, 0.05, 200.0);
    CHECK(got == doctest::Approx(0.5 * (1.0 - std::exp(-20.0))).epsilon(1e-10));
}
