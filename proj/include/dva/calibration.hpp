#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "dva/date.hpp"
#include "dva/dva_models.hpp"
#include "dva/marketdata.hpp"

namespace dva {

enum class LossNormalization {
    RunningMaxGoodwill,  ///< decrease / highest goodwill seen before the writedown
    ReferenceGoodwill,   ///< decrease / goodwill at the reference quarter
};

LossNormalization parse_loss_normalization(std::string_view name);
std::string_view to_string(LossNormalization n);

struct CalibrationConfig {
    Date reference_quarter{2007, 6, 30};
    double barrier_rounding_pct = 1.0;
    LossNormalization normalization = LossNormalization::RunningMaxGoodwill;
};

/// One quarter with a goodwill decrease.
struct Writedown {
    Date quarter;
    double running_min_pct = 0.0;  ///< unrounded
    double decrease = 0.0;         ///< money
    double loss_pct = 0.0;
};

struct Calibration {
    std::string bank;
    BarrierLossSchedule schedule;
    double residual_pct = 100.0;
    double stock_ref = 0.0;
    double goodwill_ref = 0.0;
    std::vector<Writedown> writedowns;
};

/// Barrier = running minimum of stock / reference stock up to and including the
/// writedown quarter, rounded; loss = goodwill decrease under the chosen base.
/// Pairs with equal rounded barriers are merged; goodwill increases are ignored.
Calibration calibrate_bank(const BankPanel& panel, std::string_view bank, const CalibrationConfig& config = {});

std::vector<AbsolutePair> schedule_to_absolute(const BarrierLossSchedule& schedule, double stock_ref,
                                               double goodwill_ref);

/// Reads `bank,barrier_pct,loss_pct` rows, grouped by bank in file order.
std::map<std::string, BarrierLossSchedule> load_schedules(const std::filesystem::path& path);

/// Calibrated schedule against a published one.
struct ScheduleComparison {
    struct Match {
        double reference_barrier = 0.0;
        double reference_loss = 0.0;
        double barrier = 0.0;  ///< nearest calibrated barrier
        double loss = 0.0;
    };
    std::vector<Match> matches;
    std::vector<BarrierLossPair> extras;  ///< calibrated pairs with no published counterpart
    double max_barrier_gap = 0.0;
    double max_loss_gap = 0.0;

    bool barriers_within(double tolerance_pp) const { return max_barrier_gap <= tolerance_pp; }
    bool losses_within(double tolerance_pp) const { return max_loss_gap <= tolerance_pp; }
};

ScheduleComparison compare_schedules(const BarrierLossSchedule& calibrated, const BarrierLossSchedule& reference);

}  // namespace dva
