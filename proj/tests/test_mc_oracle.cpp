#include <doctest.h>

#include <cmath>

#include "dva/analytic.hpp"
#include "dva/dva_models.hpp"
#include "dva/errors.hpp"
#include "dva/mc_oracle.hpp"

using namespace dva;

namespace {

SimulationConfig config(double r, double lambda, double sigma, std::size_t paths = 50000) {
    SimulationConfig c;
    c.n_paths = paths;
    c.params.r = r;
    c.params.lambda_b = lambda;
    c.params.sigma = sigma;
    return c;
}

}  // namespace

TEST_CASE("philox known-answer vector") {
    // Reference output of Philox4x32-10 for a zero key and zero counter.
    const Philox rng(0);
    const auto out = rng({0, 0, 0, 0});
    CHECK(out == Philox::Block{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u});
}

TEST_CASE("trivial claims") {
    const auto c = config(0.05, 0.0, 0.3, 10000);
    const auto touch = price_claim(OneTouchClaim{100.0}, c, 5.0);
    CHECK(touch.estimate == 1.0);
    CHECK(touch.std_error == 0.0);
    const auto zero = price_claim(NoTouchRebateClaim{80.0, 0.0}, c, 5.0);
    CHECK(zero.estimate == 0.0);
    CHECK(zero.std_error == 0.0);
}

TEST_CASE("constant default payout") {
    const auto est = price_claim(DefaultPayoutClaim{[](double) { return 1.0; }}, config(0.05, 0.05, 0.3), 200.0);
    CHECK(std::abs(est.estimate - 0.5) < 3.0 * est.std_error);
}

TEST_CASE("one-touch against the closed form") {
    const auto c = config(0.05, 0.0, 0.4, 100000);
    const auto est = price_claim(OneTouchClaim{70.0}, c, 5.0);
    const double exact = one_touch(100.0, 70.0, Diffusion{0.05, 0.0, 0.4}, 5.0);
    CHECK(std::abs(est.estimate - exact) < 3.0 * est.std_error);
}

TEST_CASE("progressive claim against the integral price") {
    auto c = config(0.04, 0.05, 0.35, 100000);
    const double t_cap = horizon_cap(c.params.lambda_b);
    const auto est = price_claim(ProgressiveClaim{{{70.0, 1.0}, {40.0, 2.0}}}, c, t_cap);
    const double exact = progressive_pair_dva(100.0, 70.0, 1.0, c.params, t_cap) +
                         progressive_pair_dva(100.0, 40.0, 2.0, c.params, t_cap);
    CHECK(std::abs(est.estimate - exact) < 3.0 * est.std_error);
}

TEST_CASE("touch at expiry plus no-touch is the discount factor") {
    const auto c = config(0.05, 0.03, 0.3);
    const auto both = price_claims({OneTouchClaim{75.0, PayAt::Expiry}, NoTouchRebateClaim{75.0, 1.0}}, c, 4.0);
    const double combined_se = std::hypot(both[0].std_error, both[1].std_error);
    CHECK(std::abs(both[0].estimate + both[1].estimate - std::exp(-0.05 * 4.0)) <= 3.0 * combined_se + 1e-14);
}

TEST_CASE("same seed, same bits; thread count does not matter") {
    auto c = config(0.05, 0.02, 0.3, 20000);
    const auto a = price_claim(OneTouchClaim{80.0}, c, 3.0);
    const auto b = price_claim(OneTouchClaim{80.0}, c, 3.0);
    c.threads = 3;
    const auto d = price_claim(OneTouchClaim{80.0}, c, 3.0);
    CHECK(a.estimate == b.estimate);
    CHECK(a.std_error == b.std_error);
    CHECK(a.estimate == d.estimate);
    c.seed = 2;
    CHECK(price_claim(OneTouchClaim{80.0}, c, 3.0).estimate != a.estimate);
}

TEST_CASE("halving the time step moves the estimate by less than one standard error") {
    auto c = config(0.05, 0.0, 0.3, 100000);
    c.steps_per_year = 4;
    const auto coarse = price_claim(OneTouchClaim{80.0}, c, 5.0);
    c.steps_per_year = 8;
    const auto fine = price_claim(OneTouchClaim{80.0}, c, 5.0);
    CHECK(std::abs(coarse.estimate - fine.estimate) < fine.std_error);
}

TEST_CASE("without bridge correction touches are missed") {
    auto c = config(0.05, 0.0, 0.3, 50000);
    c.steps_per_year = 1;
    c.bridge_correction = false;
    const auto naive = price_claim(OneTouchClaim{80.0, PayAt::Expiry}, c, 5.0);
    const double exact = one_touch_at_expiry(100.0, 80.0, Diffusion{0.05, 0.0, 0.3}, 5.0);
    CHECK(naive.estimate < exact - 5.0 * naive.std_error);
}

TEST_CASE("invalid configurations") {
    auto c = config(0.05, 0.0, 0.3, 1000);
    CHECK_THROWS_AS(price_claim(OneTouchClaim{80.0}, c, 1.0), ValidationError);
    c = config(0.05, 0.0, 0.0);
    CHECK_THROWS_AS(price_claim(OneTouchClaim{80.0}, c, 1.0), ValidationError);
    c = config(0.05, 0.0, 0.3);
    c.steps_per_year = 3;
    CHECK_THROWS_AS(price_claim(OneTouchClaim{80.0}, c, 1.0), ValidationError);
    c.steps_per_year = 4;
    CHECK_THROWS_AS(price_claim(OneTouchClaim{-1.0}, c, 1.0), ValidationError);
    CHECK_THROWS_AS(price_claim(OneTouchClaim{80.0}, c, 0.0), ValidationError);
}
