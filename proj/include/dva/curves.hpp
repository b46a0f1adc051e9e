#pragma once

namespace dva {

/// Recovery assumed when converting CDS spreads to hazard rates.
inline constexpr double kDefaultCdsRecovery = 0.40;

/// Flat market parameters for one pricing date. All rates are annual decimals.
struct MarketParams {
    double r = 0.0;               ///< riskless rate
    double lambda_b = 0.0;        ///< own hazard rate, r_b - r
    double sigma = 0.2;           ///< lognormal stock volatility
    double gamma_s = 0.0;         ///< dividend yield on the stock
    double q_s = 0.0;             ///< stock financing (repo) cost
    double recovery_b = 0.0;      ///< recovery on issued bonds, in [0,1]
    double funding_spread = 0.0;  ///< s_F = r_F - r

    /// Throws ValidationError unless sigma > 0, lambda_b >= 0, 0 <= recovery_b <= 1
    /// and funding_spread >= 0.
    void validate() const;
};

/// Credit-triangle hazard: spread / (1 - recovery).
double hazard_from_cds(double spread, double recovery = kDefaultCdsRecovery);

/// Funding spread of an issued bond with recovery R: (1 - R) * lambda.
double funding_spread_for_recovery(double lambda_b, double recovery_b);

/// exp(-lambda t)
double survival(double lambda, double t);

/// lambda exp(-lambda t)
double default_density(double lambda, double t);

/// exp(-r t)
double discount(double r, double t);

}  // namespace dva
