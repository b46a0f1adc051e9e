#include "dva/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "dva/errors.hpp"
#include "dva/quadrature.hpp"

namespace dva {

namespace {

void require_positive(double v, const char* what) {
    if (!(v > 0.0)) throw ValidationError(std::string(what) + " must be > 0");
}

void require_diffusion(const Diffusion& d, double maturity) {
    require_positive(d.sigma, "sigma");
    if (!(maturity >= 0.0)) throw ValidationError("maturity must be >= 0");
}

double log_normal_cdf(double x) {
    return std::log(0.5 * std::erfc(-x / std::numbers::sqrt2));
}

// exp(a) * N(z) without overflow when a is large and N(z) tiny.
double scaled_cdf(double log_scale, double z) {
    return std::exp(log_scale + log_normal_cdf(z));
}

double drift_log(const Diffusion& d) { return d.r - d.gamma - 0.5 * d.sigma * d.sigma; }

}  // namespace

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double digital_call(double spot, double strike, const Diffusion& d, double maturity) {
    require_positive(spot, "spot");
    require_positive(strike, "strike");
    require_diffusion(d, maturity);
    if (maturity < kTinyMaturity) return spot > strike ? 1.0 : 0.0;
    const double vol = d.sigma * std::sqrt(maturity);
    const double d2 = (std::log(spot / strike) + drift_log(d) * maturity) / vol;
    return std::exp(-d.r * maturity) * normal_cdf(d2);
}

double digital_put(double spot, double strike, const Diffusion& d, double maturity) {
    require_positive(spot, "spot");
    require_positive(strike, "strike");
    require_diffusion(d, maturity);
    if (maturity < kTinyMaturity) return spot > strike ? 0.0 : 1.0;
    const double vol = d.sigma * std::sqrt(maturity);
    const double d2 = (std::log(spot / strike) + drift_log(d) * maturity) / vol;
    return std::exp(-d.r * maturity) * normal_cdf(-d2);
}

double touch_probability(double spot, double barrier, const Diffusion& d, double maturity) {
    require_positive(spot, "spot");
    require_positive(barrier, "barrier");
    require_diffusion(d, maturity);
    if (spot <= barrier) return 1.0;
    if (maturity < kTinyMaturity) return 0.0;
    const double x = std::log(barrier / spot);
    const double nu = drift_log(d);
    const double s2 = d.sigma * d.sigma;
    const double vol = d.sigma * std::sqrt(maturity);
    const double p = normal_cdf((x - nu * maturity) / vol) + scaled_cdf(2.0 * nu * x / s2, (x + nu * maturity) / vol);
    return std::clamp(p, 0.0, 1.0);
}

double one_touch(double spot, double barrier, const Diffusion& d, double maturity) {
    require_positive(spot, "spot");
    require_positive(barrier, "barrier");
    require_diffusion(d, maturity);
    if (spot < barrier) throw ValidationError("one_touch: spot below barrier");
    if (spot == barrier) return 1.0;
    if (maturity < kTinyMaturity) return 0.0;
    // First-passage Laplace transform truncated at T (reflection principle).
    const double x = std::log(barrier / spot);
    const double nu = drift_log(d);
    const double s2 = d.sigma * d.sigma;
    const double nu_r = std::sqrt(nu * nu + 2.0 * d.r * s2);
    const double vol = d.sigma * std::sqrt(maturity);
    const double v = scaled_cdf(x * (nu + nu_r) / s2, (x + nu_r * maturity) / vol) +
                     scaled_cdf(x * (nu - nu_r) / s2, (x - nu_r * maturity) / vol);
    return std::clamp(v, 0.0, 1.0);
}

double one_touch_at_expiry(double spot, double barrier, const Diffusion& d, double maturity) {
    require_positive(spot, "spot");
    require_positive(barrier, "barrier");
    require_diffusion(d, maturity);
    if (spot <= barrier) return std::exp(-d.r * maturity);
    if (maturity < kTinyMaturity) return 0.0;
    const double zeta = 0.5 - (d.r - d.gamma) / (d.sigma * d.sigma);
    const double reflect = std::pow(spot / barrier, 2.0 * zeta);
    return digital_put(spot, barrier, d, maturity) +
           reflect * digital_call(barrier * barrier / spot, barrier, d, maturity);
}

double rebate_no_hit(double spot, double barrier, const Diffusion& d, double maturity, double rebate) {
    require_positive(spot, "spot");
    require_positive(barrier, "barrier");
    require_diffusion(d, maturity);
    if (!(rebate >= 0.0)) throw ValidationError("rebate must be >= 0");
    if (spot <= barrier) throw ValidationError("rebate_no_hit: barrier already touched (spot <= barrier)");
    if (rebate == 0.0) return 0.0;
    if (maturity < kTinyMaturity) return rebate;
    // Survival of the running minimum above the barrier.
    const double x = std::log(barrier / spot);
    const double nu = drift_log(d);
    const double s2 = d.sigma * d.sigma;
    const double vol = d.sigma * std::sqrt(maturity);
    const double alive =
        normal_cdf((-x + nu * maturity) / vol) - scaled_cdf(2.0 * nu * x / s2, (x + nu * maturity) / vol);
    return rebate * std::exp(-d.r * maturity) * std::clamp(alive, 0.0, 1.0);
}

double rebate_no_hit_transposed(double spot, double barrier, const Diffusion& d, double maturity,
                                double rebate) {
    require_positive(spot, "spot");
    require_positive(barrier, "barrier");
    require_diffusion(d, maturity);
    if (spot <= barrier) throw ValidationError("rebate_no_hit: barrier already touched (spot <= barrier)");
    if (maturity < kTinyMaturity) return rebate;
    const double zeta = 0.5 - (d.r - d.gamma) / (d.sigma * d.sigma);
    const double reflect = std::pow(spot / barrier, 2.0 * zeta);
    return rebate * std::exp(-d.r * maturity) -
           rebate * (reflect * digital_put(barrier * barrier / spot, barrier, d, maturity) +
                     digital_call(spot, barrier, d, maturity));
}

double horizon_cap(double lambda) {
    if (!(lambda >= 0.0)) throw ValidationError("hazard rate must be >= 0");
    if (lambda == 0.0) return kMaxHorizonYears;
    return std::min(kMaxHorizonYears, -std::log(kHorizonSurvivalCutoff) / lambda);
}

double default_weighted_integral(const std::function<double(double)>& f, double lambda, double t_cap,
                                 double relative_tolerance) {
    return default_weighted_integral(f, lambda, 0.0, t_cap, relative_tolerance);
}

double default_weighted_integral(const std::function<double(double)>& f, double lambda, double from,
                                 double to, double relative_tolerance) {
    if (!(lambda >= 0.0)) throw ValidationError("hazard rate must be >= 0");
    if (!(from >= 0.0) || !(to >= from)) throw ValidationError("integration range must satisfy 0 <= from <= to");
    if (lambda == 0.0 || to == from) return 0.0;
    QuadratureOptions opt;
    opt.relative_tolerance = relative_tolerance;
    return adaptive_simpson([&](double s) { return f(s) * lambda * std::exp(-lambda * s); }, from, to, opt);
}

}  // namespace dva
