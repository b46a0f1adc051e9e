#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <variant>
#include <vector>

#include "dva/curves.hpp"
#include "dva/dva_models.hpp"

namespace dva {

/// Philox4x32-10 counter-based generator: output depends only on (key, counter).
class Philox {
public:
    using Block = std::array<std::uint32_t, 4>;

    explicit Philox(std::uint64_t seed)
        : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)} {}

    Block operator()(Block counter) const;

    /// Uniform in (0, 1) and a standard normal for a given counter.
    double uniform(Block counter) const;
    double normal(Block counter) const;

private:
    std::array<std::uint32_t, 2> key_;
};

/// Stock under risk-neutral drift r - gamma with an independent exponential
/// default time that sends it to zero. Discounting at r.
struct SimulationConfig {
    std::size_t n_paths = 100000;  ///< at least 10^4
    int steps_per_year = 4;        ///< power of two, at most 2^20
    std::uint64_t seed = 1;
    MarketParams params;
    double spot = 100.0;
    bool bridge_correction = true;
    unsigned threads = 0;  ///< 0: hardware concurrency
};

enum class PayAt { Hit, Expiry };

/// Pays 1 at the first touch of the down barrier (or at expiry) if it occurs by T.
/// Default counts as a touch.
struct OneTouchClaim {
    double barrier = 0.0;
    PayAt pay_at = PayAt::Hit;
};

/// Pays `rebate` at T if the barrier was never touched and no default occurred.
struct NoTouchRebateClaim {
    double barrier = 0.0;
    double rebate = 1.0;
};

/// Pays payout(tau) at the default time tau if tau <= T.
struct DefaultPayoutClaim {
    std::function<double(double)> payout;
};

/// For default by T, pays each loss at the earlier of its barrier touch and default.
struct ProgressiveClaim {
    std::vector<AbsolutePair> pairs;
};

using Claim = std::variant<OneTouchClaim, NoTouchRebateClaim, DefaultPayoutClaim, ProgressiveClaim>;

struct McEstimate {
    double estimate = 0.0;
    double std_error = 0.0;
};

/// Bit-identical for a given config regardless of thread count.
/// Throws ValidationError for invalid configs or claims.
McEstimate price_claim(const Claim& claim, const SimulationConfig& config, double maturity);

/// Prices several claims on the same paths.
std::vector<McEstimate> price_claims(const std::vector<Claim>& claims, const SimulationConfig& config,
                                     double maturity);

}  // namespace dva
