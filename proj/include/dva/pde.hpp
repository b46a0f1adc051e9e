#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <variant>
#include <vector>

#include "dva/curves.hpp"

namespace dva {

enum class FundingMode {
    Repo,    ///< s_F = 0, linear equation
    Funded,  ///< semi-linear funding term s_F (M + S dV/dS)^+
};

enum class DriftConvention {
    /// Drift of S d/dS after absorbing the jump term: (q_S - gamma_S + lambda_b) + lambda_b.
    Absorbed,
    /// Drift r - gamma_S, the convention of the closed-form barrier prices.
    DiffusionOnly,
};

/// Lower edge follows the degenerate dynamics at S -> 0 (no diffusion or drift).
struct DefaultStateBoundary {};

/// Lower edge is a knock-in barrier: the value there is prescribed.
struct BarrierBoundary {
    double level = 0.0;
    std::function<double(double t)> value;
};

using LowerBoundary = std::variant<DefaultStateBoundary, BarrierBoundary>;

/// Own-asset valuation problem: on default at t the asset is worth
/// M+(t,S) + R_b M-(t,S); before that it solves the replication PDE.
struct PdeProblem {
    std::function<double(double t, double s)> default_value_plus;   ///< M+ >= 0; empty means 0
    std::function<double(double t, double s)> default_value_minus;  ///< M- <= 0; empty means 0
    std::function<double(double s)> terminal;                      ///< empty means 0
    LowerBoundary lower = DefaultStateBoundary{};
    double maturity = 1.0;
    double spot = 100.0;
    MarketParams params;
    FundingMode funding = FundingMode::Repo;
    DriftConvention drift = DriftConvention::Absorbed;
};

struct PdeGrid {
    int space_steps = 400;
    int time_steps = 400;
    double s_max_multiple = 8.0;   ///< S_max >= multiple * max(spot, barrier)
    /// S_max also covers this many log-spot standard deviations (plus drift) over
    /// min(T, 1/(r + lambda)), the horizon that discounting leaves relevant.
    double s_max_std_devs = 6.0;
    double s_min_multiple = 1e-3;  ///< lower edge for DefaultStateBoundary, times spot
    int rannacher_steps = 2;
    double policy_tolerance = 1e-10;
    int max_policy_iterations = 50;
};

/// Value surface and hedge ratios on the (t, S) grid. Time index 0 is t = 0.
class PdeSolution {
public:
    PdeSolution(std::vector<double> times, std::vector<double> log_spots);

    const std::vector<double>& times() const { return times_; }
    const std::vector<double>& log_spots() const { return log_spots_; }
    double spot(std::size_t j) const;
    std::size_t time_count() const { return times_.size(); }
    std::size_t space_count() const { return log_spots_.size(); }

    double value(std::size_t n, std::size_t j) const { return value_[index(n, j)]; }
    double delta(std::size_t n, std::size_t j) const { return delta_[index(n, j)]; }
    double alpha_b(std::size_t n, std::size_t j) const { return alpha_b_[index(n, j)]; }
    double epsilon(std::size_t n, std::size_t j) const { return epsilon_[index(n, j)]; }
    /// Default value M+ + R_b M- used for the jump at node (n, j).
    double default_value(std::size_t n, std::size_t j) const { return default_value_[index(n, j)]; }

    /// Bilinear interpolation in (t, log S). Throws ValidationError outside the grid.
    double value_at(double t, double s) const { return interpolate(value_, t, s); }
    double delta_at(double t, double s) const { return interpolate(delta_, t, s); }
    double alpha_b_at(double t, double s) const { return interpolate(alpha_b_, t, s); }
    double epsilon_at(double t, double s) const { return interpolate(epsilon_, t, s); }

    const std::vector<std::string>& warnings() const { return warnings_; }
    int max_policy_iterations_used() const { return max_policy_iterations_used_; }

private:
    friend PdeSolution solve(const PdeProblem&, const PdeGrid&);

    std::size_t index(std::size_t n, std::size_t j) const { return n * log_spots_.size() + j; }
    double interpolate(const std::vector<double>& surface, double t, double s) const;

    std::vector<double> times_;
    std::vector<double> log_spots_;
    std::vector<double> value_;
    std::vector<double> delta_;
    std::vector<double> alpha_b_;
    std::vector<double> epsilon_;
    std::vector<double> default_value_;
    std::vector<std::string> warnings_;
    int max_policy_iterations_used_ = 0;
};

/// Backward Crank-Nicolson solve (Rannacher start-up) on a uniform log-spot grid.
/// Throws ValidationError for grids under 50x50 or S_max below 5x the spot/barrier,
/// ConvergenceError if policy iteration stalls in funded mode.
PdeSolution solve(const PdeProblem& problem, const PdeGrid& grid = {});

/// Hedge quantities with the risky bond price normalized to 1: the stock position,
/// the own-bond position and the cash account, so that -V = alpha_b + epsilon.
struct HedgeRatios {
    double delta = 0.0;
    double alpha_b = 0.0;
    double epsilon = 0.0;
};

HedgeRatios hedge_report(const PdeSolution& solution, double t, double s);

/// Pays `amount` on default before `maturity`.
PdeProblem make_constant_problem(double amount, const MarketParams& params, double maturity, double spot);

/// One progressive pair: pays `loss` at the earlier of the barrier hit and default,
/// for defaults before `maturity`. On the barrier the claim is worth
/// loss * (1 - exp(-lambda (T - t))), the probability of defaulting before T.
PdeProblem make_progressive_pair_problem(double spot, double barrier, double loss, const MarketParams& params,
                                         double maturity);

/// Pays the remaining amortization credits GW_AM(t) on default before the last credit.
PdeProblem make_amortizing_problem(double initial_goodwill, int years, const MarketParams& params, double spot);

/// Writes t,S,value,delta rows for the whole surface.
void write_surface_csv(const PdeSolution& solution, const std::string& path);

}  // namespace dva
