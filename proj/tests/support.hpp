#pragma once

#include <cmath>
#include <filesystem>
#include <functional>
#include <numbers>
#include <string>

#ifndef ASSETDVA_DATA_DIR
#define ASSETDVA_DATA_DIR "data"
#endif

namespace testing {

inline std::filesystem::path data_dir() { return ASSETDVA_DATA_DIR; }

/// Fresh empty directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / ("assetdva_test_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

/// Composite Simpson on [a, b] with n (even) panels. Test-side quadrature,
/// deliberately separate from the library's adaptive routine.
inline double simpson(const std::function<double(double)>& f, double a, double b, int n) {
    const double h = (b - a) / n;
    double sum = f(a) + f(b);
    for (int i = 1; i < n; ++i) sum += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
    return sum * h / 3.0;
}

/// Density of the first time log(S) drifting at nu with vol sigma reaches log(b) < log(S).
inline double first_passage_density(double spot, double barrier, double nu, double sigma, double t) {
    if (t <= 0.0) return 0.0;
    const double x = std::log(barrier / spot);
    return -x / (sigma * std::sqrt(2.0 * std::numbers::pi * t * t * t)) *
           std::exp(-(x - nu * t) * (x - nu * t) / (2.0 * sigma * sigma * t));
}

}  // namespace testing
