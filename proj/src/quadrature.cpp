#include "dva/quadrature.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "dva/errors.hpp"

namespace dva {

namespace {

struct Simpson {
    const std::function<double(double)>& f;
    const QuadratureOptions& opt;

    // Panel [a,b] with midpoint m; fa, fm, fb already evaluated; whole = Simpson estimate.
    double refine(double a, double m, double b, double fa, double fm, double fb, double whole, double eps,
                  int depth) const {
        const double lm = 0.5 * (a + m);
        const double rm = 0.5 * (m + b);
        const double flm = f(lm);
        const double frm = f(rm);
        const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        const double delta = left + right - whole;
        if (depth >= opt.min_depth && std::abs(delta) <= 15.0 * eps) {
            return left + right + delta / 15.0;
        }
        if (depth >= opt.max_depth) {
            throw ConvergenceError("adaptive Simpson did not converge on [" + std::to_string(a) + ", " +
                                   std::to_string(b) + "] at depth " + std::to_string(depth));
        }
        return refine(a, lm, m, fa, flm, fm, left, 0.5 * eps, depth + 1) +
               refine(m, rm, b, fm, frm, fb, right, 0.5 * eps, depth + 1);
    }
};

}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        const QuadratureOptions& options) {
    if (!(b > a)) return 0.0;
    const int panels = options.initial_panels > 0 ? options.initial_panels : 1;
    const double h = (b - a) / panels;

    // Coarse pass fixes the absolute error budget from the requested relative tolerance.
    std::vector<double> nodes(2 * panels + 1);
    for (int i = 0; i <= 2 * panels; ++i) nodes[i] = f(a + 0.5 * h * i);
    std::vector<double> whole(panels);
    double scale = 0.0;
    for (int p = 0; p < panels; ++p) {
        whole[p] = h / 6.0 * (nodes[2 * p] + 4.0 * nodes[2 * p + 1] + nodes[2 * p + 2]);
        scale += std::abs(whole[p]);
    }
    if (scale == 0.0) scale = std::numeric_limits<double>::min();
    const double eps = options.relative_tolerance * scale / panels;

    const Simpson s{f, options};
    double total = 0.0;
    for (int p = 0; p < panels; ++p) {
        const double pa = a + h * p;
        const double pb = (p + 1 == panels) ? b : pa + h;
        total += s.refine(pa, 0.5 * (pa + pb), pb, nodes[2 * p], nodes[2 * p + 1], nodes[2 * p + 2], whole[p],
                          eps, 0);
    }
    return total;
}

}  // namespace dva
