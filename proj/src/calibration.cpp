#include "dva/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dva/detail/csv.hpp"
#include "dva/errors.hpp"

namespace dva {

LossNormalization parse_loss_normalization(std::string_view name) {
    if (name == "running_max_goodwill" || name == "running_max") return LossNormalization::RunningMaxGoodwill;
    if (name == "reference_goodwill" || name == "reference") return LossNormalization::ReferenceGoodwill;
    throw ValidationError("unknown loss normalization '" + std::string(name) + "'");
}

std::string_view to_string(LossNormalization n) {
    return n == LossNormalization::RunningMaxGoodwill ? "running_max_goodwill" : "reference_goodwill";
}

Calibration calibrate_bank(const BankPanel& panel, std::string_view bank, const CalibrationConfig& config) {
    if (!panel.has_bank(bank)) throw ValidationError("bank '" + std::string(bank) + "' not in panel");
    if (!(config.barrier_rounding_pct > 0.0)) throw ValidationError("barrier rounding must be > 0");
    const auto& quarters = panel.quarters();
    const auto ref_it = std::find(quarters.begin(), quarters.end(), config.reference_quarter);
    if (ref_it == quarters.end()) {
        throw ValidationError("reference quarter " + config.reference_quarter.iso() + " not in panel");
    }
    const auto series = panel.series(bank);
    const auto ref = static_cast<std::size_t>(ref_it - quarters.begin());
    if (series.size() - ref < 2) throw ValidationError("calibration needs at least two quarters");

    Calibration out;
    out.bank = std::string(bank);
    out.stock_ref = series[ref].stock_price;
    out.goodwill_ref = series[ref].goodwill;
    if (!(out.stock_ref > 0.0)) throw ValidationError("reference stock price must be > 0");
    if (!(out.goodwill_ref > 0.0)) throw ValidationError("reference goodwill must be > 0");

    std::vector<BarrierLossPair> pairs;
    double running_min = 100.0;
    double running_max_goodwill = out.goodwill_ref;
    for (std::size_t i = ref + 1; i < series.size(); ++i) {
        running_min = std::min(running_min, 100.0 * series[i].stock_price / out.stock_ref);
        const double previous = series[i - 1].goodwill;
        const double decrease = previous - series[i].goodwill;
        if (decrease > 0.0) {
            const double base = config.normalization == LossNormalization::RunningMaxGoodwill
                                    ? running_max_goodwill
                                    : out.goodwill_ref;
            const double loss = 100.0 * decrease / base;
            out.writedowns.push_back({series[i].quarter_end, running_min, decrease, loss});
            const double step = config.barrier_rounding_pct;
            const double barrier = std::max(step, std::round(running_min / step) * step);
            if (!pairs.empty() && pairs.back().barrier_pct == barrier) {
                pairs.back().loss_pct += loss;
            } else {
                pairs.push_back({barrier, loss});
            }
        }
        running_max_goodwill = std::max(running_max_goodwill, series[i].goodwill);
    }
    out.schedule = BarrierLossSchedule(std::move(pairs));
    out.residual_pct = 100.0 - out.schedule.total_loss_pct();
    return out;
}

std::vector<AbsolutePair> schedule_to_absolute(const BarrierLossSchedule& schedule, double stock_ref,
                                               double goodwill_ref) {
    if (!(stock_ref > 0.0) || !(goodwill_ref > 0.0)) {
        throw ValidationError("reference stock and goodwill must be > 0");
    }
    std::vector<AbsolutePair> out;
    out.reserve(schedule.size());
    for (const auto& p : schedule.pairs()) {
        out.push_back({p.barrier_pct / 100.0 * stock_ref, p.loss_pct / 100.0 * goodwill_ref});
    }
    return out;
}

std::map<std::string, BarrierLossSchedule> load_schedules(const std::filesystem::path& path) {
    const auto rows = detail::read_csv(path);
    const auto& header = rows.front().cells;
    if (header != std::vector<std::string>{"bank", "barrier_pct", "loss_pct"}) {
        throw DataError(path.string(), rows.front().line, 1, "expected header bank,barrier_pct,loss_pct");
    }
    std::map<std::string, std::vector<BarrierLossPair>> grouped;
    for (std::size_t k = 1; k < rows.size(); ++k) {
        const auto& row = rows[k];
        if (row.cells.size() != 3) throw DataError(path.string(), row.line, 0, "expected 3 columns");
        if (row.cells[0].empty()) throw DataError(path.string(), row.line, 1, "empty bank");
        BarrierLossPair pair;
        for (int c = 1; c <= 2; ++c) {
            const auto v = detail::parse_double(row.cells[c]);
            if (!v) throw DataError(path.string(), row.line, c + 1, "malformed number '" + row.cells[c] + "'");
            (c == 1 ? pair.barrier_pct : pair.loss_pct) = *v;
        }
        grouped[row.cells[0]].push_back(pair);
    }
    std::map<std::string, BarrierLossSchedule> out;
    for (auto& [bank, pairs] : grouped) {
        try {
            out.emplace(bank, BarrierLossSchedule(std::move(pairs)));
        } catch (const ValidationError& e) {
            throw DataError(path.string(), 0, 0, bank + ": " + e.what());
        }
    }
    return out;
}

ScheduleComparison compare_schedules(const BarrierLossSchedule& calibrated, const BarrierLossSchedule& reference) {
    ScheduleComparison out;
    std::vector<bool> used(calibrated.size(), false);
    for (const auto& ref : reference.pairs()) {
        std::size_t best = calibrated.size();
        double gap = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < calibrated.size(); ++i) {
            const double g = std::abs(calibrated.pairs()[i].barrier_pct - ref.barrier_pct);
            if (g < gap) {
                gap = g;
                best = i;
            }
        }
        ScheduleComparison::Match m{ref.barrier_pct, ref.loss_pct, 0.0, 0.0};
        if (best < calibrated.size()) {
            m.barrier = calibrated.pairs()[best].barrier_pct;
            m.loss = calibrated.pairs()[best].loss_pct;
            used[best] = true;
        }
        out.max_barrier_gap = std::max(out.max_barrier_gap, gap);
        out.max_loss_gap = std::max(out.max_loss_gap, std::abs(m.loss - ref.loss_pct));
        out.matches.push_back(m);
    }
    for (std::size_t i = 0; i < calibrated.size(); ++i) {
        if (!used[i]) out.extras.push_back(calibrated.pairs()[i]);
    }
    return out;
}

}  // namespace dva
