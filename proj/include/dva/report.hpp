#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "dva/calibration.hpp"
#include "dva/date.hpp"
#include "dva/marketdata.hpp"

namespace dva {

enum class ScheduleSource {
    Calibrated,  ///< calibrate each bank from the panel in the same run
    File,        ///< read schedules from `schedule_file`
};

/// Everything a report run depends on. Loaded from a flat `key = value` file.
struct RunConfig {
    std::filesystem::path data_dir;
    std::vector<std::string> banks;  ///< empty: all banks in the panel
    double cds_recovery = 0.40;
    double bond_recovery = 0.0;
    ScheduleSource schedule_source = ScheduleSource::Calibrated;
    std::filesystem::path schedule_file;
    CalibrationConfig calibration;
    double quadrature_tolerance = 1e-8;
    double dva_quantum = 1e-6;  ///< DVA is rounded to this many million USD

    // Oracle and amortization settings used by the matching subcommands.
    std::size_t mc_paths = 100000;
    int mc_steps_per_year = 4;
    std::uint64_t mc_seed = 20070630;
    double amortizing_goodwill = 100.0;
    std::vector<int> amortizing_years{10, 15, 20};
    double amortizing_rate = 0.05;
};

/// Keys mirror the field names; lists are comma separated. Unknown keys are errors.
RunConfig parse_run_config(const std::string& text, const std::string& source = "<config>");
RunConfig load_run_config(const std::filesystem::path& path);

/// One bank at one quarter. Money in million USD.
struct DvaReportRow {
    std::string bank;
    Date quarter_end;
    // Inputs used for this row.
    double r = 0.0;
    double lambda_b = 0.0;
    double sigma = 0.0;
    double stock = 0.0;
    double running_min_pct = 0.0;  ///< min of stock / reference stock since the reference quarter
    std::string active_barriers;   ///< unbreached barriers in percent, ';' separated
    double constant_residual = 0.0;
    // Outputs.
    double progressive_dva = 0.0;
    double constant_dva = 0.0;
    double dva = 0.0;
    double dva_previous = 0.0;
    double dva_change = 0.0;
    double reported_profit = 0.0;
    double adjusted_profit = 0.0;

    friend bool operator==(const DvaReportRow&, const DvaReportRow&) = default;
};

/// One row per bank and quarter after the reference quarter, sorted by bank then date.
/// Throws ValidationError for a bank without a schedule.
std::vector<DvaReportRow> run_report(const BankPanel& panel, const RunConfig& config);

/// Same, with schedules supplied by the caller.
std::vector<DvaReportRow> run_report(const BankPanel& panel, const RunConfig& config,
                                     const std::map<std::string, Calibration>& calibrations);

struct AmortizingReport {
    std::vector<int> years;
    std::vector<double> times;
    std::vector<std::vector<double>> staircase_pct;  ///< [n_A index][time index], GW_AM(t)/G0 in percent
    std::vector<double> cds_bps;
    std::vector<std::vector<double>> dva_pct;  ///< [n_A index][spread index], DVA/G0 in percent
};

/// Staircase on [0, max n_A + 1] and DVA against the CDS grid at a flat rate.
AmortizingReport amortizing_report(double initial_goodwill, const std::vector<int>& years, double r,
                                   const std::vector<double>& cds_bps, double cds_recovery = 0.40,
                                   double time_step = 0.05);

/// Column order of the report CSV.
inline constexpr const char* kReportCsvHeader =
    "bank,quarter_end,r,lambda_b,sigma,stock,running_min_pct,active_barriers,constant_residual,"
    "progressive_dva,constant_dva,dva,dva_previous,dva_change,reported_profit,adjusted_profit";

/// Throws ValidationError on empty rows or an unwritable path.
void write_report_csv(const std::vector<DvaReportRow>& rows, const std::filesystem::path& path);
void write_report_csv(const std::vector<DvaReportRow>& rows, std::ostream& out);
std::vector<DvaReportRow> read_report_csv(const std::filesystem::path& path);

/// Reported and adjusted profit per quarter, one panel per bank.
void write_report_svg(const std::vector<DvaReportRow>& rows, const std::filesystem::path& path);

void write_amortizing_csv(const AmortizingReport& report, const std::filesystem::path& staircase_path,
                          const std::filesystem::path& dva_path);

}  // namespace dva
