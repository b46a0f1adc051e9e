#include "dva/curves.hpp"

#include <cmath>
#include <string>

#include "dva/errors.hpp"

namespace dva {

namespace {

void require_time(double t) {
    if (!(t >= 0.0)) throw ValidationError("time must be >= 0, got " + std::to_string(t));
}

}  // namespace

void MarketParams::validate() const {
    if (!(sigma > 0.0)) throw ValidationError("sigma must be > 0");
    if (!(lambda_b >= 0.0)) throw ValidationError("lambda_b must be >= 0");
    if (!(recovery_b >= 0.0 && recovery_b <= 1.0)) throw ValidationError("recovery_b must lie in [0,1]");
    if (!(funding_spread >= 0.0)) throw ValidationError("funding spread must be >= 0");
    if (!std::isfinite(r) || !std::isfinite(gamma_s) || !std::isfinite(q_s)) {
        throw ValidationError("rates must be finite");
    }
}

double hazard_from_cds(double spread, double recovery) {
    if (!(recovery >= 0.0 && recovery < 1.0)) throw ValidationError("recovery must lie in [0,1)");
    if (!(spread >= 0.0)) throw ValidationError("CDS spread must be >= 0");
    return spread / (1.0 - recovery);
}

double funding_spread_for_recovery(double lambda_b, double recovery_b) {
    if (!(recovery_b >= 0.0 && recovery_b <= 1.0)) throw ValidationError("recovery must lie in [0,1]");
    return (1.0 - recovery_b) * lambda_b;
}

double survival(double lambda, double t) {
    require_time(t);
    if (!(lambda >= 0.0)) throw ValidationError("hazard rate must be >= 0");
    return std::exp(-lambda * t);
}

double default_density(double lambda, double t) {
    require_time(t);
    if (!(lambda >= 0.0)) throw ValidationError("hazard rate must be >= 0");
    return lambda * std::exp(-lambda * t);
}

double discount(double r, double t) {
    require_time(t);
    return std::exp(-r * t);
}

}  // namespace dva
