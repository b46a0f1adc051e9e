#pragma once

#include <functional>

#include "dva/curves.hpp"

namespace dva {

/// Lognormal diffusion with risk-neutral drift r - gamma, discounted at r.
/// Default is not part of these prices; it enters through the hazard weighting.
struct Diffusion {
    double r = 0.0;
    double gamma = 0.0;
    double sigma = 0.2;

    static Diffusion from(const MarketParams& p) { return {p.r, p.gamma_s, p.sigma}; }
};

/// Maturities below this are priced at their boundary values.
inline constexpr double kTinyMaturity = 1e-12;

/// Truncation horizon used when integrating against the default density.
inline constexpr double kMaxHorizonYears = 200.0;
inline constexpr double kHorizonSurvivalCutoff = 1e-6;

double normal_cdf(double x);

/// exp(-rT) N(d2); indicator(S > K) at T = 0.
double digital_call(double spot, double strike, const Diffusion& d, double maturity);

/// exp(-rT) N(-d2); 1 - indicator(S > K) at T = 0 so parity also holds there.
double digital_put(double spot, double strike, const Diffusion& d, double maturity);

/// Probability that the down barrier is touched on [0, T].
double touch_probability(double spot, double barrier, const Diffusion& d, double maturity);

/// Pays 1 at the first hitting time of the down barrier if it occurs by T.
/// Returns 1 when spot == barrier. Throws ValidationError if spot < barrier.
double one_touch(double spot, double barrier, const Diffusion& d, double maturity);

/// Pays 1 at T if the down barrier was touched on [0, T]. Built from digitals:
/// P_d(S; b) + (S/b)^(2 zeta) C_d(b^2/S; b), zeta = 1/2 - (r - gamma)/sigma^2.
double one_touch_at_expiry(double spot, double barrier, const Diffusion& d, double maturity);

/// Pays `rebate` at T if the down barrier was never touched on [0, T].
/// Throws ValidationError if spot <= barrier.
double rebate_no_hit(double spot, double barrier, const Diffusion& d, double maturity, double rebate);

/// The no-touch rebate with the call and put legs exchanged:
/// R e^{-rT} - R((S/b)^(2 zeta) P_d(b^2/S; b) + C_d(S; b)).
/// Kept only to show that this arrangement does not price the claim.
double rebate_no_hit_transposed(double spot, double barrier, const Diffusion& d, double maturity,
                                double rebate);

/// Horizon at which survival drops to 1e-6, capped at 200 years; 200 when lambda = 0.
double horizon_cap(double lambda);

/// Integral of f(s) * lambda * exp(-lambda s) over [0, t_cap], adaptive Simpson.
/// Throws ConvergenceError if the quadrature fails.
double default_weighted_integral(const std::function<double(double)>& f, double lambda, double t_cap,
                                 double relative_tolerance = 1e-8);

/// Same over [from, to].
double default_weighted_integral(const std::function<double(double)>& f, double lambda, double from,
                                 double to, double relative_tolerance);

}  // namespace dva
