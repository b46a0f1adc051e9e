#include "dva/dva_models.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "dva/analytic.hpp"
#include "dva/errors.hpp"

namespace dva {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void validate_progressive(const ProgressiveModel& m) {
    if (!(m.spot > 0.0)) throw ValidationError("progressive model: spot must be > 0");
    if (!(m.spot_ref > 0.0)) throw ValidationError("progressive model: reference spot must be > 0");
    if (!(m.goodwill_ref >= 0.0)) throw ValidationError("progressive model: reference goodwill must be >= 0");
    if (m.schedule.total_loss_pct() > 100.0 + 1e-9) {
        throw ValidationError("progressive model: losses exceed 100% of goodwill");
    }
}

}  // namespace

BarrierLossSchedule::BarrierLossSchedule(std::vector<BarrierLossPair> pairs) : pairs_(std::move(pairs)) {
    for (std::size_t i = 0; i < pairs_.size(); ++i) {
        const auto& p = pairs_[i];
        if (!(p.barrier_pct > 0.0 && p.barrier_pct <= 100.0)) {
            throw ValidationError("barrier " + std::to_string(p.barrier_pct) + "% outside (0, 100]");
        }
        if (!(p.loss_pct >= 0.0)) throw ValidationError("loss must be >= 0");
        if (i > 0 && !(p.barrier_pct < pairs_[i - 1].barrier_pct)) {
            throw ValidationError("barriers must be strictly decreasing");
        }
    }
}

double BarrierLossSchedule::total_loss_pct() const {
    return std::accumulate(pairs_.begin(), pairs_.end(), 0.0,
                           [](double acc, const BarrierLossPair& p) { return acc + p.loss_pct; });
}

ConstantDva constant_dva(double amount, const MarketParams& params, double t_cap) {
    if (!(amount >= 0.0)) throw ValidationError("constant model: amount must be >= 0");
    if (!(t_cap >= 0.0)) throw ValidationError("horizon must be >= 0");
    if (!(params.lambda_b >= 0.0)) throw ValidationError("lambda_b must be >= 0");
    const double rate = params.r + params.lambda_b;
    if (params.lambda_b == 0.0) return {};
    if (!(rate > 0.0)) throw ValidationError("constant model requires r + lambda_b > 0");
    const double full = params.lambda_b / rate * amount;
    const double tail = std::exp(-rate * t_cap);
    return {full * (1.0 - tail), full * tail};
}

double amortizing_value(double initial_goodwill, int years, double r, double t) {
    if (years < 1) throw ValidationError("amortization length must be >= 1 year");
    if (!(t >= 0.0)) throw ValidationError("time must be >= 0");
    if (t > years) return 0.0;
    const int now = static_cast<int>(std::ceil(t));
    const double credit = initial_goodwill / years;
    double total = 0.0;
    for (int i = std::max(now, 1); i <= years; ++i) total += std::exp(-r * (i - now)) * credit;
    return total;
}

double amortizing_dva(double initial_goodwill, int years, const MarketParams& params,
                      double relative_tolerance) {
    if (years < 1) throw ValidationError("amortization length must be >= 1 year");
    if (!(initial_goodwill >= 0.0)) throw ValidationError("initial goodwill must be >= 0");
    if (params.lambda_b == 0.0) return 0.0;
    double total = 0.0;
    // GW_AM is constant on each (k, k+1]; integrate each step with its right-limit value.
    for (int k = 0; k < years; ++k) {
        const double level = amortizing_value(initial_goodwill, years, params.r, k + 1.0);
        total += default_weighted_integral([&](double s) { return level * std::exp(-params.r * s); },
                                           params.lambda_b, k, k + 1.0, relative_tolerance);
    }
    return total;
}

double progressive_pair_dva(double spot, double barrier, double loss, const MarketParams& params,
                            double t_cap, double relative_tolerance) {
    if (!(loss >= 0.0)) throw ValidationError("loss must be >= 0");
    if (spot <= barrier || loss == 0.0 || params.lambda_b == 0.0) return 0.0;
    const auto d = Diffusion::from(params);
    const auto integrand = [&](double s) {
        return one_touch(spot, barrier, d, s) + rebate_no_hit(spot, barrier, d, s, 1.0);
    };
    return loss * default_weighted_integral(integrand, params.lambda_b, t_cap, relative_tolerance);
}

double progressive_dva(const ProgressiveModel& model, const MarketParams& params, double t_cap,
                       double relative_tolerance) {
    validate_progressive(model);
    double total = 0.0;
    for (const auto& p : model.schedule.pairs()) {
        const double barrier = p.barrier_pct / 100.0 * model.spot_ref;
        const double loss = p.loss_pct / 100.0 * model.goodwill_ref;
        total += progressive_pair_dva(model.spot, barrier, loss, params, t_cap, relative_tolerance);
    }
    return total;
}

double combined_dva(const CombinedModel& model, const MarketParams& params, double t_cap,
                    double relative_tolerance) {
    return progressive_dva(model.progressive, params, t_cap, relative_tolerance) +
           constant_dva(model.constant_residual, params, t_cap).value;
}

void validate(const DvaModelSpec& spec) {
    std::visit(overloaded{
                   [](const ConstantModel& m) {
                       if (!(m.amount >= 0.0)) throw ValidationError("constant model: amount must be >= 0");
                   },
                   [](const AmortizingModel& m) {
                       if (!(m.initial_goodwill >= 0.0)) throw ValidationError("amortizing model: G0 must be >= 0");
                       if (m.years < 1) throw ValidationError("amortizing model: n_A must be >= 1");
                   },
                   [](const ProgressiveModel& m) { validate_progressive(m); },
                   [](const CombinedModel& m) {
                       validate_progressive(m.progressive);
                       if (!(m.constant_residual >= 0.0)) {
                           throw ValidationError("combined model: residual must be >= 0");
                       }
                   },
               },
               spec);
}

DvaValue evaluate(const DvaModelSpec& spec, const MarketParams& params, double t_cap,
                  double relative_tolerance) {
    validate(spec);
    const auto pct = [](double money, double base) { return base > 0.0 ? 100.0 * money / base : 0.0; };
    return std::visit(
        overloaded{
            [&](const ConstantModel& m) {
                const double v = constant_dva(m.amount, params, t_cap).value;
                return DvaValue{v, pct(v, m.amount)};
            },
            [&](const AmortizingModel& m) {
                const double v = amortizing_dva(m.initial_goodwill, m.years, params, relative_tolerance);
                return DvaValue{v, pct(v, m.initial_goodwill)};
            },
            [&](const ProgressiveModel& m) {
                const double v = progressive_dva(m, params, t_cap, relative_tolerance);
                return DvaValue{v, pct(v, m.goodwill_ref)};
            },
            [&](const CombinedModel& m) {
                const double v = combined_dva(m, params, t_cap, relative_tolerance);
                return DvaValue{v, pct(v, m.progressive.goodwill_ref)};
            },
        },
        spec);
}

}  // namespace dva
