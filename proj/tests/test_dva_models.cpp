#include <doctest.h>

#include <cmath>

#include "dva/analytic.hpp"
#include "dva/dva_models.hpp"
#include "dva/errors.hpp"

using namespace dva;

namespace {

MarketParams params(double r, double lambda, double sigma = 0.3) {
    MarketParams p;
    p.r = r;
    p.lambda_b = lambda;
    p.sigma = sigma;
    return p;
}

// Infinite-horizon value of paying 1 at min(hit, default): Laplace transform of the hit time.
double pair_infinite_horizon(double spot, double barrier, const MarketParams& p) {
    const double nu = p.r - p.gamma_s - 0.5 * p.sigma * p.sigma;
    const double a = p.r + p.lambda_b;
    const double x = std::log(barrier / spot);
    const double laplace = std::exp(x * (nu + std::sqrt(nu * nu + 2.0 * a * p.sigma * p.sigma)) / (p.sigma * p.sigma));
    return p.lambda_b / a * (1.0 - laplace) + laplace;
}

}  // namespace

TEST_CASE("constant model closed form") {
    const auto v = constant_dva(1.0, params(0.05, 0.05), 200.0);
    CHECK(std::abs(v.value - 0.5 * (1.0 - std::exp(-20.0))) < 1e-10);
    CHECK(v.truncation == doctest::Approx(0.5 * std::exp(-20.0)));
    CHECK(constant_dva(7.0, params(0.05, 0.0), 200.0).value == 0.0);
    CHECK(constant_dva(0.0, params(0.05, 0.1), 200.0).value == 0.0);
    CHECK_THROWS_AS(constant_dva(-1.0, params(0.05, 0.1), 200.0), ValidationError);
}

TEST_CASE("constant model is increasing in the hazard rate") {
    double last = 0.0;
    for (double lambda : {0.01, 0.02, 0.05, 0.1, 0.3}) {
        const double v = constant_dva(100.0, params(0.04, lambda), horizon_cap(lambda)).value;
        CHECK(v > last);
        last = v;
    }
}

TEST_CASE("amortizing credits") {
    CHECK(amortizing_value(100.0, 15, 0.0, 0.0) == doctest::Approx(100.0));
    CHECK(amortizing_value(100.0, 15, 0.05, 0.0) == doctest::Approx(68.60700401766366).epsilon(1e-12));
    CHECK(amortizing_value(100.0, 15, 0.05, 2.5) == doctest::Approx(65.33368646237406).epsilon(1e-12));
    CHECK(amortizing_value(100.0, 15, 0.05, 15.5) == 0.0);
    CHECK_THROWS_AS(amortizing_value(100.0, 0, 0.05, 0.0), ValidationError);
}

TEST_CASE("amortizing staircase moves only at integer years") {
    for (int i = 0; i < 15; ++i) {
        const double a = amortizing_value(100.0, 15, 0.05, i + 0.001);
        const double b = amortizing_value(100.0, 15, 0.05, i + 0.999);
        CHECK(a == b);
    }
    CHECK(amortizing_value(100.0, 15, 0.05, 3.0) != amortizing_value(100.0, 15, 0.05, 3.0001));
}

TEST_CASE("amortizing DVA matches a step-by-step closed form") {
    const auto p = params(0.05, 0.04);
    double expected = 0.0;
    const double a = p.r + p.lambda_b;
    for (int k = 0; k < 15; ++k) {
        const double level = amortizing_value(100.0, 15, p.r, k + 1.0);
        expected += level * p.lambda_b / a * (std::exp(-a * k) - std::exp(-a * (k + 1)));
    }
    CHECK(amortizing_dva(100.0, 15, p) == doctest::Approx(expected).epsilon(1e-9));
    CHECK(amortizing_dva(100.0, 15, params(0.05, 0.0)) == 0.0);
}

TEST_CASE("progressive pair matches the infinite-horizon transform") {
    for (double barrier : {40.0, 70.0, 95.0}) {
        const auto p = params(0.03, 0.1, 0.4);
        const double got = progressive_pair_dva(100.0, barrier, 1.0, p, horizon_cap(p.lambda_b));
        CHECK(got == doctest::Approx(pair_infinite_horizon(100.0, barrier, p)).epsilon(2e-6));
    }
}

TEST_CASE("progressive pair edge cases") {
    const auto p = params(0.03, 0.05);
    CHECK(progressive_pair_dva(100.0, 100.0, 5.0, p, 200.0) == 0.0);
    CHECK(progressive_pair_dva(100.0, 50.0, 0.0, p, 200.0) == 0.0);
    CHECK(progressive_pair_dva(100.0, 50.0, 5.0, params(0.03, 0.0), 200.0) == 0.0);
    // A barrier far below spot leaves only the default leg.
    CHECK(progressive_pair_dva(100.0, 1e-6, 1.0, p, 200.0) ==
          doctest::Approx(constant_dva(1.0, p, 200.0).value).epsilon(1e-6));
}

TEST_CASE("combined model is the sum of its legs") {
    const auto p = params(0.04, 0.03, 0.35);
    const ProgressiveModel prog{BarrierLossSchedule({{49, 0.1}, {14, 18.5}}), 40.0, 48.89, 65845.0};
    const CombinedModel combined{prog, 0.5 * 65845.0};
    const double t_cap = horizon_cap(p.lambda_b);
    CHECK(combined_dva(combined, p, t_cap) ==
          doctest::Approx(progressive_dva(prog, p, t_cap) + constant_dva(0.5 * 65845.0, p, t_cap).value));
    const auto v = evaluate(combined, p, t_cap);
    CHECK(v.percent_of_initial == doctest::Approx(100.0 * v.money / 65845.0));
}

TEST_CASE("schedule invariants") {
    CHECK_NOTHROW(BarrierLossSchedule({{90, 1}, {50, 2}}));
    CHECK_THROWS_AS(BarrierLossSchedule({{50, 1}, {90, 2}}), ValidationError);
    CHECK_THROWS_AS(BarrierLossSchedule({{50, 1}, {50, 2}}), ValidationError);
    CHECK_THROWS_AS(BarrierLossSchedule({{120, 1}}), ValidationError);
    CHECK_THROWS_AS(BarrierLossSchedule({{50, -1}}), ValidationError);
    CHECK(BarrierLossSchedule({{90, 1.5}, {50, 2}}).total_loss_pct() == 3.5);
    CHECK_THROWS_AS(validate(DvaModelSpec{ProgressiveModel{BarrierLossSchedule({{50, 120}}), 1, 1, 1}}),
                    ValidationError);
}

TEST_CASE("amortizing limits") {
    CHECK(amortizing_value(100.0, 10, 0.0, 0.0) == doctest::Approx(100.0));
    CHECK(amortizing_value(100.0, 10, 0.07, 10.0 - 1e-9) == doctest::Approx(10.0));
    // Immediate default loses the whole undiscounted stream.
    CHECK(amortizing_dva(100.0, 10, params(0.0, 1e4)) == doctest::Approx(100.0).epsilon(1e-3));
}

// Frozen reference from the jump-to-default oracle, 10^6 paths, seed 15.
TEST_CASE("amortizing DVA against a frozen Monte Carlo value") {
    const double v = amortizing_dva(1.0, 15, params(0.05, hazard_from_cds(0.03)));
    CHECK(std::abs(v - 0.1985840904) < 3.0 * 0.0002410367);
}

// Frozen reference from the jump-to-default oracle, 10^6 paths, seed 35170, loss in percent of goodwill.
TEST_CASE("WFC mid-2007 progressive value against a frozen Monte Carlo value") {
    MarketParams p = params(0.055095, hazard_from_cds(10.5e-4), 0.21114);
    const ProgressiveModel m{BarrierLossSchedule({{40, 2.5}}), 35.17, 35.17, 100.0};
    CHECK(std::abs(progressive_dva(m, p, horizon_cap(p.lambda_b)) - 0.1404496158) < 3.0 * 0.0004197188);
}

TEST_CASE("combined model additivity") {
    const auto p = params(0.0525, hazard_from_cds(25e-4), 0.25);
    const double t_cap = horizon_cap(p.lambda_b);
    const ProgressiveModel gs{BarrierLossSchedule({{39, 7.9}}), 216.75, 216.75, 3145.0};
    CHECK(progressive_dva(ProgressiveModel{BarrierLossSchedule(), 216.75, 216.75, 3145.0}, p, t_cap) == 0.0);
    CHECK(combined_dva(CombinedModel{gs, 0.0}, p, t_cap) == progressive_dva(gs, p, t_cap));
    const CombinedModel constant_only{ProgressiveModel{BarrierLossSchedule(), 216.75, 216.75, 3145.0}, 3145.0};
    CHECK(combined_dva(constant_only, p, t_cap) == constant_dva(3145.0, p, t_cap).value);
    const CombinedModel both{gs, 0.921 * 3145.0};
    CHECK(combined_dva(both, p, t_cap) ==
          doctest::Approx(progressive_dva(gs, p, t_cap) + constant_dva(0.921 * 3145.0, p, t_cap).value).epsilon(1e-14));
}
