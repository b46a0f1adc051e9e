#include "dva/marketdata.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <set>

#include "dva/detail/csv.hpp"
#include "dva/errors.hpp"

namespace dva {

namespace {

struct WideTable {
    std::string file;
    std::vector<std::string> columns;  // excludes the date column
    std::vector<Date> dates;
    std::vector<std::vector<double>> values;  // [row][column]
};

WideTable read_wide_table(const std::filesystem::path& path) {
    const auto file = path.string();
    const auto rows = detail::read_csv(path);
    const auto& header = rows.front();
    if (header.cells.size() < 2 || header.cells[0] != "date") {
        throw DataError(file, header.line, 1, "header must start with 'date' followed by value columns");
    }
    WideTable table;
    table.file = file;
    table.columns.assign(header.cells.begin() + 1, header.cells.end());
    std::set<std::string> seen_columns;
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
        if (table.columns[c].empty()) {
            throw DataError(file, header.line, static_cast<int>(c) + 2, "empty column name");
        }
        if (!seen_columns.insert(table.columns[c]).second) {
            throw DataError(file, header.line, static_cast<int>(c) + 2, "duplicate column '" + table.columns[c] + "'");
        }
    }

    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& row = rows[r];
        if (row.cells.size() != header.cells.size()) {
            throw DataError(file, row.line, 0,
                            "malformed row: expected " + std::to_string(header.cells.size()) + " cells, found " +
                                std::to_string(row.cells.size()));
        }
        if (row.cells[0].empty()) throw DataError(file, row.line, 1, "missing date");
        Date date;
        try {
            date = Date::parse_iso(row.cells[0]);
        } catch (const ValidationError& e) {
            throw DataError(file, row.line, 1, e.what());
        }
        if (!date.is_quarter_end()) {
            throw DataError(file, row.line, 1, date.iso() + " is not a calendar quarter end");
        }
        if (!table.dates.empty()) {
            if (date == table.dates.back()) {
                throw DataError(file, row.line, 1, "duplicate quarter " + date.iso());
            }
            if (date < table.dates.back()) {
                throw DataError(file, row.line, 1,
                                "dates not increasing: " + date.iso() + " follows " + table.dates.back().iso());
            }
        }
        std::vector<double> values;
        values.reserve(table.columns.size());
        for (std::size_t c = 1; c < row.cells.size(); ++c) {
            const auto& cell = row.cells[c];
            if (cell.empty()) {
                throw DataError(file, row.line, static_cast<int>(c) + 1,
                                "missing value for " + header.cells[c] + " at " + date.iso());
            }
            const auto v = detail::parse_double(cell);
            if (!v) throw DataError(file, row.line, static_cast<int>(c) + 1, "not a number: '" + cell + "'");
            values.push_back(*v);
        }
        table.dates.push_back(date);
        table.values.push_back(std::move(values));
    }
    if (table.dates.empty()) throw DataError(file, 0, 0, "no data rows");
    return table;
}

void require_same_grid(const WideTable& reference, const WideTable& other) {
    if (other.dates.size() != reference.dates.size()) {
        throw DataError(other.file, 0, 0,
                        "quarter grid differs from " + reference.file + ": " + std::to_string(other.dates.size()) +
                            " rows vs " + std::to_string(reference.dates.size()));
    }
    for (std::size_t i = 0; i < other.dates.size(); ++i) {
        if (other.dates[i] != reference.dates[i]) {
            throw DataError(other.file, static_cast<int>(i) + 2, 1,
                            "date " + other.dates[i].iso() + " does not match " + reference.dates[i].iso() +
                                " in " + reference.file);
        }
    }
}

void check_observation(const std::string& bank, const QuarterObservation& o) {
    const auto where = bank + " " + o.quarter_end.iso();
    if (!(o.goodwill >= 0.0)) throw ValidationError("goodwill must be >= 0 (" + where + ")");
    if (!(o.stock_price > 0.0)) throw ValidationError("stock price must be > 0 (" + where + ")");
    if (!(o.cds_5y.value > 0.0)) throw ValidationError("CDS spread must be > 0 (" + where + ")");
    if (!(o.atm_vol_18m.value > 0.0)) throw ValidationError("implied vol must be > 0 (" + where + ")");
}

void write_wide(const std::filesystem::path& path, const BankPanel& panel,
                double (*getter)(const QuarterObservation&)) {
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot write " + path.string());
    out << "date";
    for (const auto& b : panel.banks()) out << ',' << b;
    out << '\n';
    for (std::size_t q = 0; q < panel.quarter_count(); ++q) {
        out << panel.quarters()[q].iso();
        for (const auto& b : panel.banks()) out << ',' << detail::format_double(getter(panel.series(b)[q]));
        out << '\n';
    }
}

}  // namespace

PanelField parse_panel_field(std::string_view name) {
    if (name == "goodwill") return PanelField::Goodwill;
    if (name == "stock" || name == "stock_price") return PanelField::StockPrice;
    if (name == "profit") return PanelField::Profit;
    if (name == "cds" || name == "cds_5y") return PanelField::Cds5y;
    if (name == "vol" || name == "atm_vol_18m") return PanelField::AtmVol18m;
    throw ValidationError("unknown panel field '" + std::string(name) + "'");
}

double field_value(const QuarterObservation& obs, PanelField field) {
    switch (field) {
        case PanelField::Goodwill: return obs.goodwill;
        case PanelField::StockPrice: return obs.stock_price;
        case PanelField::Profit: return obs.profit;
        case PanelField::Cds5y: return obs.cds_5y.decimal();
        case PanelField::AtmVol18m: return obs.atm_vol_18m.decimal();
    }
    return 0.0;
}

BankPanel::BankPanel(std::vector<std::string> banks, std::vector<Date> quarters,
                     std::vector<std::vector<QuarterObservation>> series, std::vector<Percent> swap_5y)
    : banks_(std::move(banks)), quarters_(std::move(quarters)), series_(std::move(series)),
      swap_5y_(std::move(swap_5y)) {
    if (banks_.empty()) throw ValidationError("panel has no banks");
    if (quarters_.empty()) throw ValidationError("panel has no quarters");
    if (series_.size() != banks_.size()) throw ValidationError("one series per bank required");
    if (swap_5y_.size() != quarters_.size()) throw ValidationError("swap rate series must cover every quarter");
    for (std::size_t q = 1; q < quarters_.size(); ++q) {
        if (!(quarters_[q - 1] < quarters_[q])) {
            throw ValidationError("quarter grid not strictly increasing at " + quarters_[q].iso());
        }
    }
    for (const auto& q : quarters_) {
        if (!q.is_quarter_end()) throw ValidationError(q.iso() + " is not a calendar quarter end");
    }
    for (std::size_t b = 0; b < banks_.size(); ++b) {
        if (series_[b].size() != quarters_.size()) {
            throw ValidationError("series for " + banks_[b] + " is not aligned to the quarter grid");
        }
        for (std::size_t q = 0; q < quarters_.size(); ++q) {
            if (series_[b][q].quarter_end != quarters_[q]) {
                throw ValidationError("series for " + banks_[b] + " misaligned at " + quarters_[q].iso());
            }
            check_observation(banks_[b], series_[b][q]);
        }
    }
}

bool BankPanel::has_bank(std::string_view bank) const {
    return std::find(banks_.begin(), banks_.end(), bank) != banks_.end();
}

std::size_t BankPanel::bank_index(std::string_view bank) const {
    const auto it = std::find(banks_.begin(), banks_.end(), bank);
    if (it == banks_.end()) throw ValidationError("unknown bank '" + std::string(bank) + "'");
    return static_cast<std::size_t>(it - banks_.begin());
}

std::span<const QuarterObservation> BankPanel::series(std::string_view bank) const {
    return series_[bank_index(bank)];
}

std::size_t BankPanel::quarter_index(Date quarter) const {
    const auto it = std::lower_bound(quarters_.begin(), quarters_.end(), quarter);
    if (it == quarters_.end() || *it != quarter) {
        throw ValidationError("quarter " + quarter.iso() + " is not on the panel grid");
    }
    return static_cast<std::size_t>(it - quarters_.begin());
}

const QuarterObservation& BankPanel::at(std::string_view bank, Date quarter) const {
    return series_[bank_index(bank)][quarter_index(quarter)];
}

BankPanel load_panel(const std::filesystem::path& dir) {
    const auto goodwill = read_wide_table(dir / panel_files::goodwill);
    const auto stock = read_wide_table(dir / panel_files::stock_price);
    const auto profit = read_wide_table(dir / panel_files::profit);
    const auto cds = read_wide_table(dir / panel_files::cds_5y);
    const auto vol = read_wide_table(dir / panel_files::atm_vol_18m);
    const auto swap = read_wide_table(dir / panel_files::swap_5y);

    for (const auto* t : {&stock, &profit, &cds, &vol}) {
        if (t->columns != goodwill.columns) {
            throw DataError(t->file, 1, 0, "bank columns differ from " + goodwill.file);
        }
        require_same_grid(goodwill, *t);
    }
    if (swap.columns.size() != 1 || swap.columns[0] != "rate_pct") {
        throw DataError(swap.file, 1, 2, "expected header 'date,rate_pct'");
    }
    require_same_grid(goodwill, swap);

    std::vector<std::vector<QuarterObservation>> series(goodwill.columns.size());
    for (std::size_t b = 0; b < goodwill.columns.size(); ++b) {
        series[b].reserve(goodwill.dates.size());
        for (std::size_t q = 0; q < goodwill.dates.size(); ++q) {
            series[b].push_back(QuarterObservation{
                .quarter_end = goodwill.dates[q],
                .goodwill = goodwill.values[q][b],
                .stock_price = stock.values[q][b],
                .profit = profit.values[q][b],
                .cds_5y = BasisPoints{cds.values[q][b]},
                .atm_vol_18m = Percent{vol.values[q][b]},
            });
        }
    }
    std::vector<Percent> swap_rates;
    swap_rates.reserve(swap.dates.size());
    for (const auto& row : swap.values) swap_rates.push_back(Percent{row[0]});

    return BankPanel(goodwill.columns, goodwill.dates, std::move(series), std::move(swap_rates));
}

void save_panel(const BankPanel& panel, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    write_wide(dir / panel_files::goodwill, panel, [](const QuarterObservation& o) { return o.goodwill; });
    write_wide(dir / panel_files::stock_price, panel, [](const QuarterObservation& o) { return o.stock_price; });
    write_wide(dir / panel_files::profit, panel, [](const QuarterObservation& o) { return o.profit; });
    write_wide(dir / panel_files::cds_5y, panel, [](const QuarterObservation& o) { return o.cds_5y.value; });
    write_wide(dir / panel_files::atm_vol_18m, panel,
               [](const QuarterObservation& o) { return o.atm_vol_18m.value; });
    std::ofstream out(dir / panel_files::swap_5y);
    if (!out) throw ValidationError("cannot write " + (dir / panel_files::swap_5y).string());
    out << "date,rate_pct\n";
    for (std::size_t q = 0; q < panel.quarter_count(); ++q) {
        out << panel.quarters()[q].iso() << ',' << detail::format_double(panel.swap_5y(q).value) << '\n';
    }
}

std::vector<double> relative_series(const BankPanel& panel, std::string_view bank, PanelField field,
                                    Date base_quarter) {
    const auto series = panel.series(bank);
    const double base = field_value(series[panel.quarter_index(base_quarter)], field);
    if (base == 0.0) throw ValidationError("base value is zero at " + base_quarter.iso());
    std::vector<double> out;
    out.reserve(series.size());
    for (const auto& obs : series) out.push_back(field_value(obs, field) / base);
    return out;
}

}  // namespace dva
