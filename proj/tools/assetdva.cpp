// assetdva: command-line driver for the goodwill DVA library.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "dva/analytic.hpp"
#include "dva/calibration.hpp"
#include "dva/detail/csv.hpp"
#include "dva/errors.hpp"
#include "dva/marketdata.hpp"
#include "dva/mc_oracle.hpp"
#include "dva/pde.hpp"
#include "dva/report.hpp"

namespace fs = std::filesystem;
using dva::detail::format_double;

namespace {

#ifdef ASSETDVA_DATA_DIR
const char* const kDefaultDataDir = ASSETDVA_DATA_DIR;
#else
const char* const kDefaultDataDir = "data";
#endif

struct Common {
    std::string data_dir;
    std::string config_file;
    std::vector<std::string> banks;
    double recovery = 0.40;
    std::string out;
};

dva::RunConfig make_config(const Common& c, const CLI::App& sub) {
    dva::RunConfig config;
    if (!c.config_file.empty()) config = dva::load_run_config(c.config_file);
    // Command-line flags override the file.
    if (!c.data_dir.empty()) config.data_dir = c.data_dir;
    if (config.data_dir.empty()) config.data_dir = kDefaultDataDir;
    if (!c.banks.empty()) config.banks = c.banks;
    if (sub.count("--recovery") > 0) config.cds_recovery = c.recovery;
    return config;
}

// Writes to --out if given, else stdout.
void emit_text(const std::string& text, const std::string& out) {
    if (out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(out, std::ios::binary);
    if (!f || !(f << text)) throw dva::ValidationError("cannot write " + out);
}

int cmd_validate(const dva::RunConfig& config) {
    const auto panel = dva::load_panel(config.data_dir);
    std::cout << "panel ok: " << panel.banks().size() << " banks, " << panel.quarter_count() << " quarters ("
              << panel.quarters().front().iso() << " to " << panel.quarters().back().iso() << ")\n";
    return 0;
}

int cmd_calibrate(const dva::RunConfig& config, const std::string& reference_file, const std::string& out) {
    const auto panel = dva::load_panel(config.data_dir);
    const auto banks = config.banks.empty() ? panel.banks() : config.banks;
    std::map<std::string, dva::BarrierLossSchedule> reference;
    fs::path ref_path = reference_file.empty() ? config.data_dir / "reference_schedule.csv" : fs::path(reference_file);
    if (fs::exists(ref_path)) reference = dva::load_schedules(ref_path);

    std::ostringstream csv;
    csv << "bank,barrier_pct,loss_pct,residual_pct,normalization\n";
    std::ostringstream table;
    table << "Calibrated barriers b (% of reference stock) and losses l (% of goodwill), "
          << to_string(config.calibration.normalization) << "\n";
    for (const auto& bank : banks) {
        const auto cal = dva::calibrate_bank(panel, bank, config.calibration);
        table << "\n" << bank << "  residual " << format_double(std::round(cal.residual_pct * 10) / 10) << "%\n";
        table << "   b      l\n";
        for (const auto& p : cal.schedule.pairs()) {
            char line[64];
            std::snprintf(line, sizeof line, "  %3.0f  %5.1f\n", p.barrier_pct, p.loss_pct);
            table << line;
            csv << bank << ',' << format_double(p.barrier_pct) << ',' << format_double(p.loss_pct) << ','
                << format_double(cal.residual_pct) << ',' << to_string(config.calibration.normalization) << '\n';
        }
        if (const auto it = reference.find(bank); it != reference.end()) {
            const auto cmp = dva::compare_schedules(cal.schedule, it->second);
            char line[160];
            std::snprintf(line, sizeof line, "  vs reference: max barrier gap %.1f pp, max loss gap %.1f pp, %zu extra pair(s)\n",
                          cmp.max_barrier_gap, cmp.max_loss_gap, cmp.extras.size());
            table << line;
        }
    }
    if (out.empty()) {
        std::cout << table.str();
    } else {
        emit_text(csv.str(), out);
        std::cout << table.str();
    }
    return 0;
}

int cmd_report(const dva::RunConfig& config, const std::string& format, const std::string& out) {
    const auto panel = dva::load_panel(config.data_dir);
    const auto rows = dva::run_report(panel, config);
    if (format == "svg") {
        if (out.empty()) throw dva::ValidationError("--format svg needs --out");
        dva::write_report_svg(rows, out);
        return 0;
    }
    if (!out.empty()) {
        dva::write_report_csv(rows, out);
        return 0;
    }
    dva::write_report_csv(rows, std::cout);
    return 0;
}

int cmd_amortize(const dva::RunConfig& config, const std::vector<int>& years, const std::vector<double>& cds,
                 const std::string& out) {
    const auto report = dva::amortizing_report(config.amortizing_goodwill, years.empty() ? config.amortizing_years : years,
                                               config.amortizing_rate, cds, config.cds_recovery);
    if (!out.empty()) {
        fs::create_directories(out);
        dva::write_amortizing_csv(report, fs::path(out) / "amortizing_staircase.csv", fs::path(out) / "amortizing_dva.csv");
        return 0;
    }
    std::cout << "cds_bps";
    for (int n : report.years) std::cout << ",n_" << n << "_dva_pct";
    std::cout << '\n';
    for (std::size_t i = 0; i < report.cds_bps.size(); ++i) {
        std::cout << format_double(report.cds_bps[i]);
        for (const auto& col : report.dva_pct) std::cout << ',' << format_double(col[i]);
        std::cout << '\n';
    }
    return 0;
}

struct OracleArgs {
    std::string claim = "one-touch";
    double spot = 100.0;
    double barrier = 80.0;
    double rebate = 1.0;
    double amount = 1.0;
    double loss = 1.0;
    double maturity = 5.0;
    double r = 0.05;
    double sigma = 0.2;
    double gamma = 0.0;
    double lambda = 0.0;
    std::size_t paths = 0;
    int steps = 0;
    std::uint64_t seed = 0;
};

int cmd_oracle(const dva::RunConfig& config, const OracleArgs& a, const std::string& out) {
    dva::SimulationConfig sim;
    sim.n_paths = a.paths ? a.paths : config.mc_paths;
    sim.steps_per_year = a.steps ? a.steps : config.mc_steps_per_year;
    sim.seed = a.seed ? a.seed : config.mc_seed;
    sim.spot = a.spot;
    sim.params.r = a.r;
    sim.params.sigma = a.sigma;
    sim.params.gamma_s = a.gamma;
    sim.params.lambda_b = a.lambda;
    const dva::Diffusion d{a.r, a.gamma, a.sigma};

    dva::Claim claim;
    double maturity = a.maturity;
    std::string analytic = "";
    if (a.claim == "one-touch") {
        claim = dva::OneTouchClaim{a.barrier, dva::PayAt::Hit};
        if (a.lambda == 0.0) analytic = format_double(dva::one_touch(a.spot, a.barrier, d, maturity));
    } else if (a.claim == "one-touch-expiry") {
        claim = dva::OneTouchClaim{a.barrier, dva::PayAt::Expiry};
        if (a.lambda == 0.0) analytic = format_double(dva::one_touch_at_expiry(a.spot, a.barrier, d, maturity));
    } else if (a.claim == "no-touch") {
        claim = dva::NoTouchRebateClaim{a.barrier, a.rebate};
        if (a.lambda == 0.0) analytic = format_double(dva::rebate_no_hit(a.spot, a.barrier, d, maturity, a.rebate));
    } else if (a.claim == "constant") {
        const double k = a.amount;
        claim = dva::DefaultPayoutClaim{[k](double) { return k; }};
        analytic = format_double(dva::constant_dva(k, sim.params, maturity).value);
    } else if (a.claim == "progressive") {
        maturity = dva::horizon_cap(a.lambda);
        claim = dva::ProgressiveClaim{{{a.barrier, a.loss}}};
        analytic = format_double(dva::progressive_pair_dva(a.spot, a.barrier, a.loss, sim.params, maturity));
    } else {
        throw dva::ValidationError("unknown claim '" + a.claim + "'");
    }
    const auto est = dva::price_claim(claim, sim, maturity);
    std::ostringstream text;
    text << "claim,maturity,n_paths,steps_per_year,seed,estimate,std_error,analytic\n"
         << a.claim << ',' << format_double(maturity) << ',' << sim.n_paths << ',' << sim.steps_per_year << ','
         << sim.seed << ',' << format_double(est.estimate) << ',' << format_double(est.std_error) << ',' << analytic
         << '\n';
    emit_text(text.str(), out);
    return 0;
}

struct PdeArgs {
    double spot = 100.0;
    double barrier = 50.0;
    double loss = 1.0;
    double amount = 1.0;
    double r = 0.05;
    double lambda = 0.05;
    double sigma = 0.2;
    int space = 400;
    int time = 400;
    double s_max_multiple = dva::PdeGrid{}.s_max_multiple;
    double funding_spread = 0.0;
    int max_policy_iterations = dva::PdeGrid{}.max_policy_iterations;
    std::string dump;
};

int cmd_pde_check(const PdeArgs& a, const std::string& out) {
    dva::MarketParams params;
    params.r = a.r;
    params.lambda_b = a.lambda;
    params.sigma = a.sigma;
    dva::PdeGrid grid;
    grid.space_steps = a.space;
    grid.time_steps = a.time;
    grid.s_max_multiple = a.s_max_multiple;
    grid.max_policy_iterations = a.max_policy_iterations;
    const double t_cap = dva::horizon_cap(a.lambda);

    std::ostringstream text;
    text << "problem,analytic,pde,relative_error,delta_at_spot\n";
    const auto row = [&](const char* name, double analytic, const dva::PdeSolution& sol) {
        const double v = sol.value_at(0.0, a.spot);
        const double rel = analytic != 0.0 ? std::abs(v - analytic) / std::abs(analytic) : std::abs(v);
        text << name << ',' << format_double(analytic) << ',' << format_double(v) << ',' << format_double(rel) << ','
             << format_double(sol.delta_at(0.0, a.spot)) << '\n';
        for (const auto& w : sol.warnings()) std::cerr << "warning (" << name << "): " << w << '\n';
    };

    const auto constant = dva::solve(dva::make_constant_problem(a.amount, params, t_cap, a.spot), grid);
    row("constant", dva::constant_dva(a.amount, params, t_cap).value, constant);
    const auto pair = dva::solve(dva::make_progressive_pair_problem(a.spot, a.barrier, a.loss, params, t_cap), grid);
    row("progressive_pair", dva::progressive_pair_dva(a.spot, a.barrier, a.loss, params, t_cap), pair);
    if (a.funding_spread > 0.0) {
        auto funded = dva::make_progressive_pair_problem(a.spot, a.barrier, a.loss, params, t_cap);
        funded.params.funding_spread = a.funding_spread;
        funded.funding = dva::FundingMode::Funded;
        const auto sol = dva::solve(funded, grid);
        text << "progressive_pair_funded,," << format_double(sol.value_at(0.0, a.spot)) << ",,"
             << format_double(sol.delta_at(0.0, a.spot)) << '\n';
    }
    if (!a.dump.empty()) dva::write_surface_csv(pair, a.dump);
    emit_text(text.str(), out);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Goodwill DVA: calibration, pricing, reporting and numerical checks"};
    app.require_subcommand(1);

    Common common;
    const auto add_common = [&](CLI::App* sub, bool banks) {
        sub->add_option("--data-dir", common.data_dir, "Directory with the panel CSV files");
        sub->add_option("--config", common.config_file, "Flat key = value configuration file")->check(CLI::ExistingFile);
        sub->add_option("--recovery", common.recovery, "Recovery used to turn CDS spreads into hazard rates")
            ->check(CLI::Range(0.0, 0.999));
        sub->add_option("--out", common.out, "Output path (default: stdout)");
        if (banks) sub->add_option("--bank", common.banks, "Restrict to these tickers");
    };

    auto* validate = app.add_subcommand("validate", "Load and check the panel");
    add_common(validate, false);

    auto* calibrate = app.add_subcommand("calibrate", "Derive barrier/loss schedules from the panel");
    add_common(calibrate, true);
    std::string normalization = "running_max_goodwill";
    std::string reference_file;
    calibrate->add_option("--normalization", normalization, "running_max_goodwill or reference_goodwill");
    calibrate->add_option("--reference", reference_file, "Published schedule to compare against");

    auto* report = app.add_subcommand("report", "Quarterly DVA and adjusted profit per bank");
    add_common(report, true);
    std::string format = "csv";
    report->add_option("--format", format, "csv or svg")->check(CLI::IsMember({"csv", "svg"}));

    auto* amortize = app.add_subcommand("amortize", "Straight-line amortization tables");
    add_common(amortize, false);
    std::vector<int> years;
    std::vector<double> cds{0, 25, 50, 75, 100, 150, 200, 250, 300, 350, 400, 450, 500};
    amortize->add_option("--n-years", years, "Amortization lengths (default 10 15 20)");
    amortize->add_option("--cds", cds, "CDS spreads in bps");

    auto* oracle = app.add_subcommand("oracle", "Monte Carlo price of a single claim");
    add_common(oracle, false);
    OracleArgs oa;
    oracle->add_option("--claim", oa.claim, "one-touch, one-touch-expiry, no-touch, constant or progressive");
    oracle->add_option("--spot", oa.spot);
    oracle->add_option("--barrier", oa.barrier);
    oracle->add_option("--rebate", oa.rebate);
    oracle->add_option("--amount", oa.amount);
    oracle->add_option("--loss", oa.loss);
    oracle->add_option("--maturity", oa.maturity);
    oracle->add_option("--r", oa.r);
    oracle->add_option("--sigma", oa.sigma);
    oracle->add_option("--gamma", oa.gamma);
    oracle->add_option("--lambda", oa.lambda);
    oracle->add_option("--paths", oa.paths);
    oracle->add_option("--steps", oa.steps, "Steps per year (power of two)");
    oracle->add_option("--seed", oa.seed);

    auto* pde = app.add_subcommand("pde-check", "PDE against the closed forms");
    add_common(pde, false);
    PdeArgs pa;
    pde->add_option("--spot", pa.spot);
    pde->add_option("--barrier", pa.barrier);
    pde->add_option("--loss", pa.loss);
    pde->add_option("--amount", pa.amount);
    pde->add_option("--r", pa.r);
    pde->add_option("--lambda", pa.lambda);
    pde->add_option("--sigma", pa.sigma);
    pde->add_option("--space-steps", pa.space);
    pde->add_option("--time-steps", pa.time);
    pde->add_option("--s-max-multiple", pa.s_max_multiple, "Upper grid edge as a multiple of max(spot, barrier)");
    pde->add_option("--funding-spread", pa.funding_spread, "Also solve the barrier problem in funded mode");
    pde->add_option("--max-policy-iterations", pa.max_policy_iterations);
    pde->add_option("--dump-surface", pa.dump, "Write t,S,value,delta for the barrier problem");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        CLI::App* sub = app.get_subcommands().front();
        auto config = make_config(common, *sub);
        if (sub == validate) return cmd_validate(config);
        if (sub == calibrate) {
            if (sub->count("--normalization") > 0) config.calibration.normalization = dva::parse_loss_normalization(normalization);
            return cmd_calibrate(config, reference_file, common.out);
        }
        if (sub == report) return cmd_report(config, format, common.out);
        if (sub == amortize) return cmd_amortize(config, years, cds, common.out);
        if (sub == oracle) return cmd_oracle(config, oa, common.out);
        if (sub == pde) return cmd_pde_check(pa, common.out);
    } catch (const dva::ConvergenceError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const dva::ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}
