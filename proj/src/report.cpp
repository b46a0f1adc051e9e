#include "dva/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "dva/analytic.hpp"
#include "dva/curves.hpp"
#include "dva/detail/csv.hpp"
#include "dva/dva_models.hpp"
#include "dva/errors.hpp"

namespace dva {

namespace {

std::vector<std::string> selected_banks(const BankPanel& panel, const RunConfig& config) {
    if (config.banks.empty()) return panel.banks();
    for (const auto& b : config.banks) {
        if (!panel.has_bank(b)) throw ValidationError("bank '" + b + "' not in panel");
    }
    return config.banks;
}

std::string join_barriers(const std::vector<BarrierLossPair>& pairs) {
    std::string out;
    for (const auto& p : pairs) {
        if (!out.empty()) out += ';';
        out += detail::format_double(p.barrier_pct);
    }
    return out;
}

std::ofstream open_output(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("cannot write " + path.string());
    return out;
}

std::string fixed(double v, int digits = 2) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

}  // namespace

std::vector<DvaReportRow> run_report(const BankPanel& panel, const RunConfig& config) {
    std::map<std::string, Calibration> calibrations;
    const auto banks = selected_banks(panel, config);
    if (config.schedule_source == ScheduleSource::Calibrated) {
        for (const auto& b : banks) calibrations.emplace(b, calibrate_bank(panel, b, config.calibration));
    } else {
        if (config.schedule_file.empty()) throw ValidationError("schedule_source = file needs schedule_file");
        const auto schedules = load_schedules(config.schedule_file);
        const auto ref = panel.quarter_index(config.calibration.reference_quarter);
        for (const auto& b : banks) {
            const auto it = schedules.find(b);
            if (it == schedules.end()) continue;
            Calibration c;
            c.bank = b;
            c.schedule = it->second;
            c.residual_pct = 100.0 - c.schedule.total_loss_pct();
            c.stock_ref = panel.series(b)[ref].stock_price;
            c.goodwill_ref = panel.series(b)[ref].goodwill;
            calibrations.emplace(b, std::move(c));
        }
    }
    return run_report(panel, config, calibrations);
}

std::vector<DvaReportRow> run_report(const BankPanel& panel, const RunConfig& config,
                                     const std::map<std::string, Calibration>& calibrations) {
    auto banks = selected_banks(panel, config);
    std::sort(banks.begin(), banks.end());
    const auto ref = panel.quarter_index(config.calibration.reference_quarter);
    if (panel.quarter_count() - ref < 2) throw ValidationError("report needs a quarter after the reference");

    std::vector<DvaReportRow> rows;
    for (const auto& bank : banks) {
        const auto it = calibrations.find(bank);
        if (it == calibrations.end()) throw ValidationError("no calibration for bank '" + bank + "'");
        const auto& cal = it->second;
        if (cal.residual_pct < 0.0) throw ValidationError(bank + ": schedule losses exceed 100%");
        const auto series = panel.series(bank);
        const double residual = cal.residual_pct / 100.0 * cal.goodwill_ref;

        double running_min = 100.0;
        long long previous_units = 0;
        for (std::size_t q = ref; q < series.size(); ++q) {
            const auto& obs = series[q];
            running_min = std::min(running_min, 100.0 * obs.stock_price / cal.stock_ref);

            MarketParams params;
            params.r = panel.swap_5y(q).decimal();
            params.lambda_b = hazard_from_cds(obs.cds_5y.decimal(), config.cds_recovery);
            params.sigma = obs.atm_vol_18m.decimal();
            params.recovery_b = config.bond_recovery;
            params.validate();

            std::vector<BarrierLossPair> active;
            for (const auto& p : cal.schedule.pairs()) {
                if (running_min > p.barrier_pct) active.push_back(p);
            }
            const double t_cap = horizon_cap(params.lambda_b);
            const ProgressiveModel model{BarrierLossSchedule(active), obs.stock_price, cal.stock_ref, cal.goodwill_ref};
            const double progressive = progressive_dva(model, params, t_cap, config.quadrature_tolerance);
            const double constant = constant_dva(residual, params, t_cap).value;
            const auto units = std::llround((progressive + constant) / config.dva_quantum);

            if (q > ref) {
                DvaReportRow row;
                row.bank = bank;
                row.quarter_end = obs.quarter_end;
                row.r = params.r;
                row.lambda_b = params.lambda_b;
                row.sigma = params.sigma;
                row.stock = obs.stock_price;
                row.running_min_pct = running_min;
                row.active_barriers = join_barriers(active);
                row.constant_residual = residual;
                row.progressive_dva = progressive;
                row.constant_dva = constant;
                row.dva = static_cast<double>(units) * config.dva_quantum;
                row.dva_previous = static_cast<double>(previous_units) * config.dva_quantum;
                row.dva_change = static_cast<double>(units - previous_units) * config.dva_quantum;
                row.reported_profit = obs.profit;
                row.adjusted_profit = obs.profit - row.dva_change;
                rows.push_back(std::move(row));
            }
            previous_units = units;
        }
    }
    return rows;
}

AmortizingReport amortizing_report(double initial_goodwill, const std::vector<int>& years, double r,
                                   const std::vector<double>& cds_bps, double cds_recovery, double time_step) {
    if (!(initial_goodwill > 0.0)) throw ValidationError("initial goodwill must be > 0");
    if (years.empty()) throw ValidationError("need at least one amortization length");
    if (!(time_step > 0.0)) throw ValidationError("time step must be > 0");
    for (double s : cds_bps) {
        if (!(s >= 0.0)) throw ValidationError("CDS spreads must be >= 0");
    }
    AmortizingReport out;
    out.years = years;
    out.cds_bps = cds_bps;
    const int horizon = *std::max_element(years.begin(), years.end()) + 1;
    const auto n_times = static_cast<std::size_t>(std::llround(horizon / time_step));
    for (std::size_t i = 0; i <= n_times; ++i) out.times.push_back(static_cast<double>(i) * time_step);

    for (int n : years) {
        std::vector<double> stair;
        for (double t : out.times) stair.push_back(100.0 * amortizing_value(initial_goodwill, n, r, t) / initial_goodwill);
        out.staircase_pct.push_back(std::move(stair));
        std::vector<double> dva;
        for (double s : cds_bps) {
            MarketParams params;
            params.r = r;
            params.lambda_b = hazard_from_cds(s / 10000.0, cds_recovery);
            dva.push_back(100.0 * amortizing_dva(initial_goodwill, n, params) / initial_goodwill);
        }
        out.dva_pct.push_back(std::move(dva));
    }
    return out;
}

void write_report_csv(const std::vector<DvaReportRow>& rows, const std::filesystem::path& path) {
    if (rows.empty()) throw ValidationError("no report rows to write");
    auto out = open_output(path);
    write_report_csv(rows, out);
    if (!out) throw ValidationError("failed writing " + path.string());
}

void write_report_csv(const std::vector<DvaReportRow>& rows, std::ostream& out) {
    if (rows.empty()) throw ValidationError("no report rows to write");
    using detail::format_double;
    out << kReportCsvHeader << '\n';
    for (const auto& r : rows) {
        out << r.bank << ',' << r.quarter_end.iso() << ',' << format_double(r.r) << ',' << format_double(r.lambda_b)
            << ',' << format_double(r.sigma) << ',' << format_double(r.stock) << ','
            << format_double(r.running_min_pct) << ',' << r.active_barriers << ','
            << format_double(r.constant_residual) << ',' << format_double(r.progressive_dva) << ','
            << format_double(r.constant_dva) << ',' << format_double(r.dva) << ',' << format_double(r.dva_previous)
            << ',' << format_double(r.dva_change) << ',' << format_double(r.reported_profit) << ','
            << format_double(r.adjusted_profit) << '\n';
    }
}

std::vector<DvaReportRow> read_report_csv(const std::filesystem::path& path) {
    const auto rows = detail::read_csv(path);
    const auto header = detail::split_csv_line(kReportCsvHeader);
    if (rows.front().cells != header) throw DataError(path.string(), rows.front().line, 1, "unexpected header");
    std::vector<DvaReportRow> out;
    for (std::size_t k = 1; k < rows.size(); ++k) {
        const auto& row = rows[k];
        if (row.cells.size() != header.size()) {
            throw DataError(path.string(), row.line, 0, "expected " + std::to_string(header.size()) + " columns");
        }
        const auto num = [&](std::size_t c) {
            const auto v = detail::parse_double(row.cells[c]);
            if (!v) throw DataError(path.string(), row.line, static_cast<int>(c + 1), "malformed number");
            return *v;
        };
        DvaReportRow r;
        r.bank = row.cells[0];
        r.quarter_end = Date::parse_iso(row.cells[1]);
        r.r = num(2);
        r.lambda_b = num(3);
        r.sigma = num(4);
        r.stock = num(5);
        r.running_min_pct = num(6);
        r.active_barriers = row.cells[7];
        r.constant_residual = num(8);
        r.progressive_dva = num(9);
        r.constant_dva = num(10);
        r.dva = num(11);
        r.dva_previous = num(12);
        r.dva_change = num(13);
        r.reported_profit = num(14);
        r.adjusted_profit = num(15);
        out.push_back(std::move(r));
    }
    return out;
}

void write_report_svg(const std::vector<DvaReportRow>& rows, const std::filesystem::path& path) {
    if (rows.empty()) throw ValidationError("no report rows to plot");
    std::vector<std::string> banks;
    for (const auto& r : rows) {
        if (std::find(banks.begin(), banks.end(), r.bank) == banks.end()) banks.push_back(r.bank);
    }
    constexpr double width = 720.0;
    constexpr double panel_height = 220.0;
    constexpr double left = 70.0;
    constexpr double right = 20.0;
    constexpr double top = 30.0;
    constexpr double bottom = 30.0;
    const double height = panel_height * static_cast<double>(banks.size());

    auto out = open_output(path);
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fixed(width, 0) << "\" height=\""
        << fixed(height, 0) << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
    for (std::size_t p = 0; p < banks.size(); ++p) {
        std::vector<const DvaReportRow*> series;
        for (const auto& r : rows) {
            if (r.bank == banks[p]) series.push_back(&r);
        }
        double lo = 0.0;
        double hi = 0.0;
        for (const auto* r : series) {
            lo = std::min({lo, r->reported_profit, r->adjusted_profit});
            hi = std::max({hi, r->reported_profit, r->adjusted_profit});
        }
        if (hi == lo) hi = lo + 1.0;
        const double y0 = panel_height * static_cast<double>(p);
        const double plot_h = panel_height - top - bottom;
        const double plot_w = width - left - right;
        const auto x_of = [&](std::size_t i) {
            return left + (series.size() > 1 ? plot_w * static_cast<double>(i) / static_cast<double>(series.size() - 1)
                                             : 0.5 * plot_w);
        };
        const auto y_of = [&](double v) { return y0 + top + plot_h * (hi - v) / (hi - lo); };
        const auto polyline = [&](const char* cls, const char* colour, auto field) {
            out << "    <polyline class=\"" << cls << "\" fill=\"none\" stroke=\"" << colour << "\" points=\"";
            for (std::size_t i = 0; i < series.size(); ++i) {
                out << (i ? " " : "") << fixed(x_of(i)) << ',' << fixed(y_of(field(*series[i])));
            }
            out << "\"/>\n";
        };

        out << "  <g class=\"panel\" id=\"panel-" << banks[p] << "\">\n"
            << "    <text x=\"" << fixed(left) << "\" y=\"" << fixed(y0 + 18.0) << "\">" << banks[p]
            << ": reported vs DVA-adjusted quarterly profit (MUSD)</text>\n"
            << "    <rect x=\"" << fixed(left) << "\" y=\"" << fixed(y0 + top) << "\" width=\"" << fixed(plot_w)
            << "\" height=\"" << fixed(plot_h) << "\" fill=\"none\" stroke=\"#999\"/>\n"
            << "    <line class=\"zero\" x1=\"" << fixed(left) << "\" y1=\"" << fixed(y_of(0.0)) << "\" x2=\""
            << fixed(left + plot_w) << "\" y2=\"" << fixed(y_of(0.0)) << "\" stroke=\"#ccc\"/>\n"
            << "    <text x=\"4\" y=\"" << fixed(y_of(hi) + 4.0) << "\">" << fixed(hi, 0) << "</text>\n"
            << "    <text x=\"4\" y=\"" << fixed(y_of(lo) + 4.0) << "\">" << fixed(lo, 0) << "</text>\n";
        polyline("reported", "#1f4e9c", [](const DvaReportRow& r) { return r.reported_profit; });
        polyline("adjusted", "#c0392b", [](const DvaReportRow& r) { return r.adjusted_profit; });
        for (std::size_t i = 0; i < series.size(); i += 4) {
            out << "    <text x=\"" << fixed(x_of(i) - 20.0) << "\" y=\"" << fixed(y0 + panel_height - 10.0) << "\">"
                << series[i]->quarter_end.quarter_label() << "</text>\n";
        }
        out << "  </g>\n";
    }
    out << "</svg>\n";
    if (!out) throw ValidationError("failed writing " + path.string());
}

void write_amortizing_csv(const AmortizingReport& report, const std::filesystem::path& staircase_path,
                          const std::filesystem::path& dva_path) {
    using detail::format_double;
    {
        auto out = open_output(staircase_path);
        out << "t";
        for (int n : report.years) out << ",n_" << n << "_pct";
        out << '\n';
        for (std::size_t i = 0; i < report.times.size(); ++i) {
            out << format_double(report.times[i]);
            for (const auto& col : report.staircase_pct) out << ',' << format_double(col[i]);
            out << '\n';
        }
    }
    auto out = open_output(dva_path);
    out << "cds_bps";
    for (int n : report.years) out << ",n_" << n << "_dva_pct";
    out << '\n';
    for (std::size_t i = 0; i < report.cds_bps.size(); ++i) {
        out << format_double(report.cds_bps[i]);
        for (const auto& col : report.dva_pct) out << ',' << format_double(col[i]);
        out << '\n';
    }
}

}  // namespace dva
