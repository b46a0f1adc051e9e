#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "dva/analytic.hpp"
#include "dva/dva_models.hpp"
#include "dva/errors.hpp"
#include "dva/pde.hpp"

using namespace dva;

namespace {

MarketParams params(double r, double lambda, double sigma = 0.3) {
    MarketParams p;
    p.r = r;
    p.lambda_b = lambda;
    p.sigma = sigma;
    return p;
}

double min_value(const PdeSolution& sol) {
    double lo = 0.0;
    for (std::size_t n = 0; n < sol.time_count(); ++n) {
        for (std::size_t j = 0; j < sol.space_count(); ++j) lo = std::min(lo, sol.value(n, j));
    }
    return lo;
}

}  // namespace

TEST_CASE("constant payoff converges to the closed form and needs no stock hedge") {
    const auto p = params(0.05, 0.05);
    const auto sol = solve(make_constant_problem(1.0, p, 200.0, 100.0));
    const double exact = constant_dva(1.0, p, 200.0).value;
    CHECK(std::abs(sol.value_at(0.0, 100.0) - exact) / exact < 1e-3);
    for (double s : {20.0, 100.0, 500.0}) {
        CHECK(std::abs(hedge_report(sol, 0.0, s).delta) < 1e-8);
        CHECK(sol.value_at(0.0, s) == doctest::Approx(sol.value_at(0.0, 100.0)).epsilon(1e-12));
    }
}

TEST_CASE("zero payoff gives the zero solution") {
    PdeProblem problem;
    problem.params = params(0.05, 0.05);
    problem.maturity = 5.0;
    const auto sol = solve(problem, PdeGrid{100, 100});
    for (std::size_t j = 0; j < sol.space_count(); ++j) CHECK(sol.value(0, j) == 0.0);
    const auto h = hedge_report(sol, 1.0, 100.0);
    CHECK(h.delta == 0.0);
    CHECK(h.alpha_b == 0.0);
    CHECK(h.epsilon == 0.0);
}

TEST_CASE("single barrier pair matches the integral price") {
    const auto p = params(0.04, 0.05, 0.3);
    const double t_cap = horizon_cap(p.lambda_b);
    for (double b : {50.0, 80.0}) {
        const auto sol = solve(make_progressive_pair_problem(100.0, b, 1.0, p, t_cap));
        const double exact = progressive_pair_dva(100.0, b, 1.0, p, t_cap);
        CHECK(std::abs(sol.value_at(0.0, 100.0) - exact) / exact < 1e-3);
        // Value rises as the stock falls toward the barrier.
        CHECK(hedge_report(sol, 0.0, b * 1.02).delta < 0.0);
    }
}

TEST_CASE("S_max sensitivity is negligible for the shipped default") {
    const auto p = params(0.04, 0.05, 0.3);
    const auto problem = make_progressive_pair_problem(100.0, 60.0, 1.0, p, 50.0);
    const PdeGrid base;
    const auto sol = solve(problem, base);
    // Extend the top by 100 cells of the same size so the shared nodes coincide.
    const double dx = sol.log_spots()[1] - sol.log_spots()[0];
    const double sd_unit = p.sigma * std::sqrt(1.0 / (p.r + p.lambda_b));
    PdeGrid wide = base;
    wide.space_steps = base.space_steps + 100;
    wide.s_max_std_devs = base.s_max_std_devs + 100.0 * dx / sd_unit;
    const auto far = solve(problem, wide);
    CHECK(far.log_spots()[base.space_steps] == doctest::Approx(sol.log_spots().back()).epsilon(1e-12));
    CHECK(std::abs(sol.value_at(0.0, 100.0) - far.value_at(0.0, 100.0)) < 1e-6);
}

TEST_CASE("hedge identities hold on the grid") {
    const auto p = params(0.04, 0.05, 0.3);
    const auto sol = solve(make_progressive_pair_problem(100.0, 60.0, 1.0, p, 30.0), PdeGrid{200, 200});
    for (std::size_t n : {std::size_t{0}, sol.time_count() / 2}) {
        for (std::size_t j = 1; j + 1 < sol.space_count(); j += 17) {
            const double v = sol.value(n, j);
            const double dx = sol.log_spots()[1] - sol.log_spots()[0];
            const double s_dvds = (sol.value(n, j + 1) - sol.value(n, j - 1)) / (2.0 * dx);
            CHECK(sol.delta(n, j) * sol.spot(j) == doctest::Approx(s_dvds).epsilon(1e-12));
            // Jump on default: the position in the own bond offsets V(after) - V(before) - S dV/dS.
            CHECK(sol.alpha_b(n, j) == doctest::Approx(-(sol.default_value(n, j) - v - s_dvds)).epsilon(1e-12));
            CHECK(-v == doctest::Approx(sol.alpha_b(n, j) + sol.epsilon(n, j)).epsilon(1e-12));
        }
    }
}

TEST_CASE("discrete positivity on nonnegative data") {
    const auto p = params(0.05, 0.08, 0.5);
    CHECK(min_value(solve(make_constant_problem(3.0, p, 20.0, 100.0), PdeGrid{100, 100})) >= 0.0);
    CHECK(min_value(solve(make_progressive_pair_problem(100.0, 70.0, 2.0, p, 20.0), PdeGrid{100, 100})) >= 0.0);
    CHECK(min_value(solve(make_amortizing_problem(100.0, 15, p, 100.0), PdeGrid{100, 150})) >= 0.0);
}

TEST_CASE("amortizing PDE agrees with the quadrature value") {
    const auto p = params(0.05, 0.04);
    const auto sol = solve(make_amortizing_problem(100.0, 15, p, 100.0), PdeGrid{60, 1500});
    CHECK(sol.value_at(0.0, 100.0) == doctest::Approx(amortizing_dva(100.0, 15, p)).epsilon(2e-3));
}

TEST_CASE("funded mode with zero spread equals repo mode") {
    auto problem = make_progressive_pair_problem(100.0, 60.0, 1.0, params(0.04, 0.05), 20.0);
    const auto repo = solve(problem, PdeGrid{120, 120});
    problem.funding = FundingMode::Funded;
    const auto funded = solve(problem, PdeGrid{120, 120});
    for (std::size_t j = 0; j < repo.space_count(); ++j) CHECK(std::abs(repo.value(0, j) - funded.value(0, j)) <= 1e-12);
}

TEST_CASE("a positive funding spread lowers the value and converges") {
    auto p = params(0.04, 0.05);
    p.funding_spread = funding_spread_for_recovery(p.lambda_b, 0.4);
    auto problem = make_progressive_pair_problem(100.0, 60.0, 1.0, p, 20.0);
    const double repo = solve(problem, PdeGrid{120, 120}).value_at(0.0, 100.0);
    problem.funding = FundingMode::Funded;
    const auto funded = solve(problem, PdeGrid{120, 120});
    CHECK(funded.value_at(0.0, 100.0) < repo);
    CHECK(funded.max_policy_iterations_used() >= 1);
    CHECK(funded.max_policy_iterations_used() < 50);
}

TEST_CASE("both drift conventions agree when the extra drift vanishes") {
    auto p = params(0.0, 0.0);
    p.r = 0.03;
    auto problem = make_progressive_pair_problem(100.0, 60.0, 1.0, p, 10.0);
    PdeProblem constant = make_constant_problem(1.0, params(0.03, 0.02), 10.0, 100.0);
    const double absorbed = solve(constant, PdeGrid{100, 100}).value_at(0.0, 100.0);
    constant.drift = DriftConvention::DiffusionOnly;
    CHECK(solve(constant, PdeGrid{100, 100}).value_at(0.0, 100.0) == doctest::Approx(absorbed).epsilon(1e-10));
    CHECK(solve(problem, PdeGrid{100, 100}).value_at(0.0, 100.0) == 0.0);
}

TEST_CASE("invalid setups are rejected") {
    const auto p = params(0.05, 0.05);
    CHECK_THROWS_AS(solve(make_constant_problem(1.0, p, 10.0, 100.0), PdeGrid{40, 100}), ValidationError);
    PdeGrid narrow;
    narrow.s_max_multiple = 3.0;
    CHECK_THROWS_AS(solve(make_constant_problem(1.0, p, 10.0, 100.0), narrow), ValidationError);
    auto negative = make_constant_problem(1.0, p, 10.0, 100.0);
    negative.default_value_plus = [](double, double) { return -1.0; };
    CHECK_THROWS_AS(solve(negative, PdeGrid{50, 50}), ValidationError);
    const auto sol = solve(make_constant_problem(1.0, p, 10.0, 100.0), PdeGrid{50, 50});
    CHECK_THROWS_AS(hedge_report(sol, 11.0, 100.0), ValidationError);
    CHECK_THROWS_AS(hedge_report(sol, 1.0, 1e12), ValidationError);
}

TEST_CASE("coarse grids with strong drift raise a Peclet warning") {
    auto p = params(0.05, 0.0, 0.05);
    p.gamma_s = -0.5;
    const auto sol = solve(make_constant_problem(1.0, p, 5.0, 100.0), PdeGrid{50, 50});
    CHECK_FALSE(sol.warnings().empty());
}
