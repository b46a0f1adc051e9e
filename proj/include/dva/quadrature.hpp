#pragma once

#include <functional>

namespace dva {

struct QuadratureOptions {
    double relative_tolerance = 1e-8;
    int max_depth = 30;
    int initial_panels = 16;
    int min_depth = 2;
};

/// Adaptive Simpson integration of f over [a, b].
/// Throws ConvergenceError if any panel fails its local error test at max_depth.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        const QuadratureOptions& options = {});

}  // namespace dva
