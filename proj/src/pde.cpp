#include "dva/pde.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "dva/detail/csv.hpp"
#include "dva/dva_models.hpp"
#include "dva/errors.hpp"

namespace dva {

namespace {

// Tridiagonal system lower[j] x[j-1] + diag[j] x[j] + upper[j] x[j+1] = rhs[j].
void solve_tridiagonal(const std::vector<double>& lower, const std::vector<double>& diag,
                       const std::vector<double>& upper, std::vector<double>& rhs, std::vector<double>& scratch) {
    const std::size_t n = diag.size();
    scratch.resize(n);
    double denom = diag[0];
    scratch[0] = upper[0] / denom;
    rhs[0] /= denom;
    for (std::size_t j = 1; j < n; ++j) {
        denom = diag[j] - lower[j] * scratch[j - 1];
        scratch[j] = upper[j] / denom;
        rhs[j] = (rhs[j] - lower[j] * rhs[j - 1]) / denom;
    }
    for (std::size_t j = n - 1; j-- > 0;) rhs[j] -= scratch[j] * rhs[j + 1];
}

// First-derivative stencil in log spot, one row per node.
struct Stencil {
    double lower = 0.0;
    double diag = 0.0;
    double upper = 0.0;
};

double apply(const Stencil& s, const std::vector<double>& v, std::size_t j) {
    double out = s.diag * v[j];
    if (j > 0) out += s.lower * v[j - 1];
    if (j + 1 < v.size()) out += s.upper * v[j + 1];
    return out;
}

}  // namespace

PdeSolution::PdeSolution(std::vector<double> times, std::vector<double> log_spots)
    : times_(std::move(times)), log_spots_(std::move(log_spots)) {
    const std::size_t size = times_.size() * log_spots_.size();
    value_.assign(size, 0.0);
    delta_.assign(size, 0.0);
    alpha_b_.assign(size, 0.0);
    epsilon_.assign(size, 0.0);
    default_value_.assign(size, 0.0);
}

double PdeSolution::spot(std::size_t j) const { return std::exp(log_spots_.at(j)); }

double PdeSolution::interpolate(const std::vector<double>& surface, double t, double s) const {
    const double tol = 1e-12 * std::max(1.0, times_.back());
    if (!(t >= times_.front() - tol && t <= times_.back() + tol) || !(s > 0.0)) {
        throw ValidationError("hedge query outside the time grid");
    }
    const double x = std::log(s);
    const double xtol = 1e-12 * std::max(1.0, std::abs(log_spots_.back()));
    if (!(x >= log_spots_.front() - xtol && x <= log_spots_.back() + xtol)) {
        throw ValidationError("hedge query outside the spot grid");
    }
    const auto locate = [](const std::vector<double>& axis, double v) {
        const double h = (axis.back() - axis.front()) / static_cast<double>(axis.size() - 1);
        double pos = (v - axis.front()) / h;
        pos = std::clamp(pos, 0.0, static_cast<double>(axis.size() - 1));
        std::size_t i = std::min(static_cast<std::size_t>(pos), axis.size() - 2);
        return std::pair{i, pos - static_cast<double>(i)};
    };
    const auto [n, wt] = locate(times_, t);
    const auto [j, wx] = locate(log_spots_, x);
    const auto at = [&](std::size_t a, std::size_t b) { return surface[index(a, b)]; };
    return (1.0 - wt) * ((1.0 - wx) * at(n, j) + wx * at(n, j + 1)) +
           wt * ((1.0 - wx) * at(n + 1, j) + wx * at(n + 1, j + 1));
}

PdeSolution solve(const PdeProblem& problem, const PdeGrid& grid) {
    const auto& p = problem.params;
    p.validate();
    if (grid.space_steps < 50 || grid.time_steps < 50) {
        throw ValidationError("PDE grid must be at least 50x50");
    }
    if (grid.s_max_multiple < 5.0) throw ValidationError("S_max must be at least 5x the spot and barrier");
    if (!(problem.maturity > 0.0)) throw ValidationError("maturity must be > 0");
    if (!(problem.spot > 0.0)) throw ValidationError("spot must be > 0");

    const auto* barrier = std::get_if<BarrierBoundary>(&problem.lower);
    if (barrier) {
        if (!(barrier->level > 0.0)) throw ValidationError("barrier must be > 0");
        if (problem.spot < barrier->level) throw ValidationError("spot lies below the barrier");
        if (!barrier->value) throw ValidationError("barrier boundary needs a value function");
    } else if (!(grid.s_min_multiple > 0.0 && grid.s_min_multiple < 1.0)) {
        throw ValidationError("s_min_multiple must lie in (0, 1)");
    }

    const double drift = problem.drift == DriftConvention::Absorbed
                             ? (p.q_s - p.gamma_s + p.lambda_b) + p.lambda_b
                             : p.r - p.gamma_s;
    const double a = 0.5 * p.sigma * p.sigma;
    const double c = drift - a;  // drift of log S
    const double kill = p.r + p.lambda_b;

    const double x_ref = std::log(std::max(problem.spot, barrier ? barrier->level : 0.0));
    const double t_eff = kill > 0.0 ? std::min(problem.maturity, 1.0 / kill) : problem.maturity;
    const double x_lo = barrier ? std::log(barrier->level) : std::log(grid.s_min_multiple * problem.spot);
    const double x_hi = x_ref + std::max(std::log(grid.s_max_multiple),
                                         grid.s_max_std_devs * p.sigma * std::sqrt(t_eff) + std::max(0.0, c) * t_eff);
    const int nx = grid.space_steps;
    const int nt = grid.time_steps;
    const double dx = (x_hi - x_lo) / nx;
    const double dt = problem.maturity / nt;

    std::vector<double> times(nt + 1);
    for (int n = 0; n <= nt; ++n) times[n] = problem.maturity * n / nt;
    times[nt] = problem.maturity;
    std::vector<double> xs(nx + 1);
    for (int j = 0; j <= nx; ++j) xs[j] = x_lo + dx * j;
    xs[nx] = x_hi;
    std::vector<double> spots(nx + 1);
    for (int j = 0; j <= nx; ++j) spots[j] = std::exp(xs[j]);

    PdeSolution sol(times, xs);
    const std::size_t m = xs.size();

    const double s_f = problem.funding == FundingMode::Funded ? p.funding_spread : 0.0;

    if (std::abs(c) * dx / (2.0 * a) > 1.0) {
        sol.warnings_.push_back("cell Peclet number above 1: central differencing may oscillate");
    }

    // Spatial operator L (without sources) and first-derivative stencil D per node.
    std::vector<Stencil> op(m), deriv(m);
    for (std::size_t j = 1; j + 1 < m; ++j) {
        op[j] = {a / (dx * dx) - c / (2.0 * dx), -2.0 * a / (dx * dx) - kill, a / (dx * dx) + c / (2.0 * dx)};
        deriv[j] = {-1.0 / (2.0 * dx), 0.0, 1.0 / (2.0 * dx)};
    }
    // Top: S^2 V_SS = 0 leaves drift * S V_S, backward difference.
    op[m - 1] = {-drift / dx, drift / dx - kill, 0.0};
    deriv[m - 1] = {-1.0 / dx, 1.0 / dx, 0.0};
    // Bottom default-state edge: no diffusion, no drift.
    op[0] = {0.0, -kill, 0.0};
    deriv[0] = {};

    const auto default_value = [&](double t, double s) {
        double plus = problem.default_value_plus ? problem.default_value_plus(t, s) : 0.0;
        double minus = problem.default_value_minus ? problem.default_value_minus(t, s) : 0.0;
        if (plus < 0.0) throw ValidationError("M+ must be >= 0");
        if (minus > 0.0) throw ValidationError("M- must be <= 0");
        return plus + p.recovery_b * minus;
    };

    std::vector<double> m_next(m), m_now(m);
    std::vector<double> v_next(m), v_now(m), v_prev_iter(m);
    for (std::size_t j = 0; j < m; ++j) {
        v_next[j] = problem.terminal ? problem.terminal(spots[j]) : 0.0;
        m_next[j] = default_value(times[nt], spots[j]);
    }
    if (barrier) v_next[0] = barrier->value(times[nt]);

    const auto store = [&](int n, const std::vector<double>& v, const std::vector<double>& mdef) {
        for (std::size_t j = 0; j < m; ++j) {
            sol.value_[sol.index(n, j)] = v[j];
            sol.default_value_[sol.index(n, j)] = mdef[j];
        }
    };
    store(nt, v_next, m_next);

    std::vector<double> lower(m), diag(m), upper(m), rhs(m), scratch(m);
    std::vector<char> policy(m), new_policy(m);

    for (int n = nt - 1; n >= 0; --n) {
        const double theta = (nt - 1 - n) < grid.rannacher_steps ? 1.0 : 0.5;
        const double t = times[n];
        for (std::size_t j = 0; j < m; ++j) m_now[j] = default_value(t, spots[j]);

        // Explicit part: (I + (1-theta) dt L) V^{n+1} + dt (theta f^n + (1-theta) f^{n+1}) + (1-theta) dt N(V^{n+1})
        std::vector<double> base(m);
        for (std::size_t j = 0; j < m; ++j) {
            const double lv = apply(op[j], v_next, j);
            double b = v_next[j] + (1.0 - theta) * dt * lv +
                       dt * p.lambda_b * (theta * m_now[j] + (1.0 - theta) * m_next[j]);
            if (s_f > 0.0 && theta < 1.0) {
                b -= (1.0 - theta) * dt * s_f * std::max(0.0, m_next[j] + apply(deriv[j], v_next, j));
            }
            base[j] = b;
        }

        for (std::size_t j = 0; j < m; ++j) {
            policy[j] = s_f > 0.0 && (m_now[j] + apply(deriv[j], v_next, j) > 0.0);
        }
        v_prev_iter = v_next;
        int iterations = 0;
        while (true) {
            ++iterations;
            for (std::size_t j = 0; j < m; ++j) {
                const double fund = policy[j] ? theta * dt * s_f : 0.0;
                lower[j] = -theta * dt * op[j].lower + fund * deriv[j].lower;
                diag[j] = 1.0 - theta * dt * op[j].diag + fund * deriv[j].diag;
                upper[j] = -theta * dt * op[j].upper + fund * deriv[j].upper;
                rhs[j] = base[j] - fund * m_now[j];
            }
            if (barrier) {
                lower[0] = 0.0;
                diag[0] = 1.0;
                upper[0] = 0.0;
                rhs[0] = barrier->value(t);
            }
            lower[0] = 0.0;
            upper[m - 1] = 0.0;
            solve_tridiagonal(lower, diag, upper, rhs, scratch);
            v_now = rhs;
            if (s_f == 0.0) break;

            double change = 0.0;
            bool same_policy = true;
            for (std::size_t j = 0; j < m; ++j) {
                change = std::max(change, std::abs(v_now[j] - v_prev_iter[j]) / std::max(1.0, std::abs(v_now[j])));
                new_policy[j] = m_now[j] + apply(deriv[j], v_now, j) > 0.0;
                same_policy = same_policy && new_policy[j] == policy[j];
            }
            if (same_policy || change <= grid.policy_tolerance) break;
            if (iterations >= grid.max_policy_iterations) {
                throw ConvergenceError("policy iteration did not converge at t = " + std::to_string(t));
            }
            policy.swap(new_policy);
            v_prev_iter = v_now;
        }
        sol.max_policy_iterations_used_ = std::max(sol.max_policy_iterations_used_, iterations);

        for (double v : v_now) {
            if (!std::isfinite(v)) throw ConvergenceError("non-finite PDE value at t = " + std::to_string(t));
        }
        store(n, v_now, m_now);
        v_next.swap(v_now);
        m_next.swap(m_now);
    }

    // Hedge ratios: delta = dV/dS, alpha_b from the jump, cash from self-financing.
    for (std::size_t n = 0; n < sol.times_.size(); ++n) {
        for (std::size_t j = 0; j < m; ++j) {
            const auto v = [&](std::size_t k) { return sol.value_[sol.index(n, k)]; };
            double dvdx;
            if (j == 0) {
                dvdx = (-3.0 * v(0) + 4.0 * v(1) - v(2)) / (2.0 * dx);
            } else if (j + 1 == m) {
                dvdx = (3.0 * v(j) - 4.0 * v(j - 1) + v(j - 2)) / (2.0 * dx);
            } else {
                dvdx = (v(j + 1) - v(j - 1)) / (2.0 * dx);
            }
            const std::size_t k = sol.index(n, j);
            sol.delta_[k] = dvdx / spots[j];
            sol.alpha_b_[k] = -(sol.default_value_[k] - sol.value_[k] - dvdx);
            sol.epsilon_[k] = -sol.value_[k] - sol.alpha_b_[k];
        }
    }
    return sol;
}

HedgeRatios hedge_report(const PdeSolution& solution, double t, double s) {
    return {solution.delta_at(t, s), solution.alpha_b_at(t, s), solution.epsilon_at(t, s)};
}

PdeProblem make_constant_problem(double amount, const MarketParams& params, double maturity, double spot) {
    if (!(amount >= 0.0)) throw ValidationError("amount must be >= 0");
    PdeProblem problem;
    problem.default_value_plus = [amount](double, double) { return amount; };
    problem.maturity = maturity;
    problem.spot = spot;
    problem.params = params;
    return problem;
}

PdeProblem make_progressive_pair_problem(double spot, double barrier, double loss, const MarketParams& params,
                                         double maturity) {
    if (!(loss >= 0.0)) throw ValidationError("loss must be >= 0");
    PdeProblem problem;
    problem.default_value_plus = [loss](double, double) { return loss; };
    const double lambda = params.lambda_b;
    problem.lower = BarrierBoundary{barrier, [=](double t) { return loss * (1.0 - std::exp(-lambda * (maturity - t))); }};
    problem.maturity = maturity;
    problem.spot = spot;
    problem.params = params;
    problem.drift = DriftConvention::DiffusionOnly;
    return problem;
}

PdeProblem make_amortizing_problem(double initial_goodwill, int years, const MarketParams& params, double spot) {
    PdeProblem problem;
    problem.default_value_plus = [=](double t, double) {
        return amortizing_value(initial_goodwill, years, params.r, t);
    };
    problem.maturity = years;
    problem.spot = spot;
    problem.params = params;
    return problem;
}

void write_surface_csv(const PdeSolution& solution, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot write " + path);
    out << "t,S,value,delta\n";
    for (std::size_t n = 0; n < solution.time_count(); ++n) {
        for (std::size_t j = 0; j < solution.space_count(); ++j) {
            out << detail::format_double(solution.times()[n]) << ',' << detail::format_double(solution.spot(j)) << ','
                << detail::format_double(solution.value(n, j)) << ',' << detail::format_double(solution.delta(n, j))
                << '\n';
        }
    }
}

}  // namespace dva
