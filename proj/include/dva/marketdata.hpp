#pragma once

#include <compare>
#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dva/date.hpp"

namespace dva {

/// A rate quoted in basis points, stored exactly as read.
struct BasisPoints {
    double value = 0.0;
    double decimal() const { return value / 10000.0; }
    friend bool operator==(const BasisPoints&, const BasisPoints&) = default;
};

/// A rate quoted in percent, stored exactly as read.
struct Percent {
    double value = 0.0;
    double decimal() const { return value / 100.0; }
    friend bool operator==(const Percent&, const Percent&) = default;
};

/// One bank at one quarter end. Money in million USD, stock in USD per share.
struct QuarterObservation {
    Date quarter_end;
    double goodwill = 0.0;
    double stock_price = 0.0;
    double profit = 0.0;
    BasisPoints cds_5y;
    Percent atm_vol_18m;

    friend bool operator==(const QuarterObservation&, const QuarterObservation&) = default;
};

enum class PanelField { Goodwill, StockPrice, Profit, Cds5y, AtmVol18m };

/// Accepts "goodwill", "stock"/"stock_price", "profit", "cds"/"cds_5y", "vol"/"atm_vol_18m".
PanelField parse_panel_field(std::string_view name);

/// Field value in normalized units (money as stored, rates as decimals).
double field_value(const QuarterObservation& obs, PanelField field);

/// Quarterly observations for a set of banks on one shared quarter-end grid,
/// plus the 5Y swap rate on the same grid. Immutable once constructed.
class BankPanel {
public:
    /// `series[i]` belongs to `banks[i]`; every series must be aligned to `quarters`.
    /// Throws ValidationError if any invariant fails.
    BankPanel(std::vector<std::string> banks, std::vector<Date> quarters,
              std::vector<std::vector<QuarterObservation>> series, std::vector<Percent> swap_5y);

    const std::vector<std::string>& banks() const { return banks_; }
    const std::vector<Date>& quarters() const { return quarters_; }
    std::size_t quarter_count() const { return quarters_.size(); }

    bool has_bank(std::string_view bank) const;
    std::span<const QuarterObservation> series(std::string_view bank) const;
    const QuarterObservation& at(std::string_view bank, Date quarter) const;
    std::size_t quarter_index(Date quarter) const;
    Percent swap_5y(std::size_t quarter_index) const { return swap_5y_.at(quarter_index); }
    std::span<const Percent> swap_5y() const { return swap_5y_; }

    friend bool operator==(const BankPanel&, const BankPanel&) = default;

private:
    std::size_t bank_index(std::string_view bank) const;

    std::vector<std::string> banks_;
    std::vector<Date> quarters_;
    std::vector<std::vector<QuarterObservation>> series_;
    std::vector<Percent> swap_5y_;
};

/// File names inside a panel directory, one per appendix table.
namespace panel_files {
inline constexpr std::string_view goodwill = "goodwill.csv";
inline constexpr std::string_view stock_price = "stock_price.csv";
inline constexpr std::string_view profit = "profit.csv";
inline constexpr std::string_view cds_5y = "cds_5y.csv";
inline constexpr std::string_view atm_vol_18m = "atm_vol_18m.csv";
inline constexpr std::string_view swap_5y = "swap_5y.csv";
}  // namespace panel_files

/// Loads and validates the six panel CSV files from `dir`.
/// Errors carry the offending file, row and column.
BankPanel load_panel(const std::filesystem::path& dir);

/// Writes the panel in the same layout `load_panel` reads; reloading is bit-exact.
void save_panel(const BankPanel& panel, const std::filesystem::path& dir);

/// value(t) / value(base_quarter) for every quarter on the grid.
std::vector<double> relative_series(const BankPanel& panel, std::string_view bank, PanelField field,
                                    Date base_quarter);

}  // namespace dva
