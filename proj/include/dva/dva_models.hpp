#pragma once

#include <variant>
#include <vector>

#include "dva/curves.hpp"

namespace dva {

/// A (barrier, loss) pair: barrier as percent of the reference stock price,
/// loss as percent of the reference goodwill.
struct BarrierLossPair {
    double barrier_pct = 0.0;
    double loss_pct = 0.0;
    friend bool operator==(const BarrierLossPair&, const BarrierLossPair&) = default;
};

/// Barriers strictly decreasing in (0, 100]; losses >= 0.
class BarrierLossSchedule {
public:
    BarrierLossSchedule() = default;
    explicit BarrierLossSchedule(std::vector<BarrierLossPair> pairs);

    const std::vector<BarrierLossPair>& pairs() const { return pairs_; }
    bool empty() const { return pairs_.empty(); }
    std::size_t size() const { return pairs_.size(); }
    double total_loss_pct() const;

    friend bool operator==(const BarrierLossSchedule&, const BarrierLossSchedule&) = default;

private:
    std::vector<BarrierLossPair> pairs_;
};

/// A pair in absolute units: barrier as a stock price, loss as money.
struct AbsolutePair {
    double barrier = 0.0;
    double loss = 0.0;
};

/// Goodwill worth `amount` until default, lost entirely on default.
struct ConstantModel {
    double amount = 0.0;
};

/// Straight-line tax amortization of `initial_goodwill` over `years`.
struct AmortizingModel {
    double initial_goodwill = 0.0;
    int years = 15;
};

/// Writedowns triggered by the stock touching barriers; the remaining
/// losses are also lost on default.
struct ProgressiveModel {
    BarrierLossSchedule schedule;
    double spot = 0.0;
    double spot_ref = 0.0;
    double goodwill_ref = 0.0;
};

struct CombinedModel {
    ProgressiveModel progressive;
    double constant_residual = 0.0;  ///< money assigned to the constant model
};

using DvaModelSpec = std::variant<ConstantModel, AmortizingModel, ProgressiveModel, CombinedModel>;

struct ConstantDva {
    double value = 0.0;
    double truncation = 0.0;  ///< value lost by stopping the integral at t_cap
};

/// lambda/(r+lambda) k (1 - exp(-(r+lambda) t_cap)), with the truncated tail reported.
ConstantDva constant_dva(double amount, const MarketParams& params, double t_cap);

/// Value at time t of the remaining yearly tax credits G0/n_A, credited at the
/// end of years max(ceil(t),1)..n_A and discounted to ceil(t). Zero after n_A.
double amortizing_value(double initial_goodwill, int years, double r, double t);

/// Expected discounted loss of the remaining credits at default before n_A:
/// integral of GW_AM(s) lambda exp(-(r+lambda) s) over [0, n_A].
double amortizing_dva(double initial_goodwill, int years, const MarketParams& params,
                      double relative_tolerance = 1e-8);

/// DVA of one pair in absolute units: loss paid at the earlier of barrier hit and default,
/// for defaults within t_cap. Zero if spot <= barrier (writedown already taken).
double progressive_pair_dva(double spot, double barrier, double loss, const MarketParams& params,
                            double t_cap, double relative_tolerance = 1e-8);

double progressive_dva(const ProgressiveModel& model, const MarketParams& params, double t_cap,
                       double relative_tolerance = 1e-8);

double combined_dva(const CombinedModel& model, const MarketParams& params, double t_cap,
                    double relative_tolerance = 1e-8);

struct DvaValue {
    double money = 0.0;
    double percent_of_initial = 0.0;
};

/// Dispatches on the model. Percent base: k, G0, reference goodwill, or
/// reference goodwill for the combined model.
DvaValue evaluate(const DvaModelSpec& spec, const MarketParams& params, double t_cap,
                  double relative_tolerance = 1e-8);

/// Throws ValidationError if a model violates its invariants.
void validate(const DvaModelSpec& spec);

}  // namespace dva
