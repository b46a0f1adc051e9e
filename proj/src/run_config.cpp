#include <charconv>
#include <fstream>
#include <sstream>

#include "dva/detail/csv.hpp"
#include "dva/errors.hpp"
#include "dva/report.hpp"

namespace dva {

namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

template <typename Int>
Int parse_int(const std::string& text, const std::string& where) {
    Int v{};
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size()) throw ValidationError(where + ": expected an integer");
    return v;
}

double parse_number(const std::string& text, const std::string& where) {
    const auto v = detail::parse_double(text);
    if (!v) throw ValidationError(where + ": expected a number");
    return *v;
}

std::vector<std::string> parse_list(const std::string& text) {
    std::vector<std::string> out;
    for (auto& cell : detail::split_csv_line(text)) {
        if (!cell.empty()) out.push_back(cell);
    }
    return out;
}

}  // namespace

RunConfig parse_run_config(const std::string& text, const std::string& source) {
    RunConfig config;
    std::istringstream in(text);
    std::string line;
    int n = 0;
    while (std::getline(in, line)) {
        ++n;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        if (trim(line).empty()) continue;
        const auto eq = line.find('=');
        const std::string where = source + ":" + std::to_string(n);
        if (eq == std::string::npos) throw ValidationError(where + ": expected key = value");
        const std::string key = trim(std::string_view(line).substr(0, eq));
        const std::string value = trim(std::string_view(line).substr(eq + 1));
        const std::string at = where + " (" + key + ")";

        if (key == "data_dir") {
            config.data_dir = value;
        } else if (key == "banks") {
            config.banks = parse_list(value);
        } else if (key == "cds_recovery") {
            config.cds_recovery = parse_number(value, at);
        } else if (key == "bond_recovery") {
            config.bond_recovery = parse_number(value, at);
        } else if (key == "schedule_source") {
            if (value == "calibrated") {
                config.schedule_source = ScheduleSource::Calibrated;
            } else if (value == "file") {
                config.schedule_source = ScheduleSource::File;
            } else {
                throw ValidationError(at + ": expected calibrated or file");
            }
        } else if (key == "schedule_file") {
            config.schedule_file = value;
        } else if (key == "reference_quarter") {
            config.calibration.reference_quarter = Date::parse(value);
        } else if (key == "barrier_rounding_pct") {
            config.calibration.barrier_rounding_pct = parse_number(value, at);
        } else if (key == "loss_normalization") {
            config.calibration.normalization = parse_loss_normalization(value);
        } else if (key == "quadrature_tolerance") {
            config.quadrature_tolerance = parse_number(value, at);
        } else if (key == "dva_quantum") {
            config.dva_quantum = parse_number(value, at);
        } else if (key == "mc_paths") {
            config.mc_paths = parse_int<std::size_t>(value, at);
        } else if (key == "mc_steps_per_year") {
            config.mc_steps_per_year = parse_int<int>(value, at);
        } else if (key == "mc_seed") {
            config.mc_seed = parse_int<std::uint64_t>(value, at);
        } else if (key == "amortizing_goodwill") {
            config.amortizing_goodwill = parse_number(value, at);
        } else if (key == "amortizing_years") {
            config.amortizing_years.clear();
            for (const auto& item : parse_list(value)) config.amortizing_years.push_back(parse_int<int>(item, at));
        } else if (key == "amortizing_rate") {
            config.amortizing_rate = parse_number(value, at);
        } else {
            throw ValidationError(where + ": unknown key '" + key + "'");
        }
    }
    if (!(config.cds_recovery >= 0.0 && config.cds_recovery < 1.0)) {
        throw ValidationError(source + ": cds_recovery must lie in [0, 1)");
    }
    if (!(config.quadrature_tolerance > 0.0)) throw ValidationError(source + ": quadrature_tolerance must be > 0");
    if (!(config.dva_quantum > 0.0)) throw ValidationError(source + ": dva_quantum must be > 0");
    return config;
}

RunConfig load_run_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open config " + path.string());
    std::ostringstream text;
    text << in.rdbuf();
    auto config = parse_run_config(text.str(), path.string());
    // Relative paths are taken relative to the config file.
    const auto base = path.parent_path();
    if (!config.data_dir.empty() && config.data_dir.is_relative()) config.data_dir = base / config.data_dir;
    if (!config.schedule_file.empty() && config.schedule_file.is_relative()) {
        config.schedule_file = base / config.schedule_file;
    }
    return config;
}

}  // namespace dva
