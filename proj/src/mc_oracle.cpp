#include "dva/mc_oracle.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <limits>
#include <numbers>
#include <thread>

#include "dva/errors.hpp"

namespace dva {

namespace {

constexpr std::uint32_t kM0 = 0xD2511F53u;
constexpr std::uint32_t kM1 = 0xCD9E8D57u;
constexpr std::uint32_t kW0 = 0x9E3779B9u;
constexpr std::uint32_t kW1 = 0xBB67AE85u;

double to_unit(std::uint32_t hi, std::uint32_t lo) {
    const std::uint64_t bits = (static_cast<std::uint64_t>(hi) << 21) ^ (lo >> 11);  // 53 bits
    return (static_cast<double>(bits) + 0.5) * 0x1p-53;
}

// Random stream identifiers inside one path.
enum class Stream : std::uint32_t { Root = 1, Midpoint, Cut, Decide, HitTime, Default };

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::size_t kBlockPaths = 4096;
constexpr int kMaxLevel = 20;

double log_normal_cdf(double x) {
    if (x > -30.0) return std::log(0.5 * std::erfc(-x / std::numbers::sqrt2));
    return -0.5 * x * x - std::log(-x) - 0.5 * std::log(2.0 * std::numbers::pi) + std::log1p(-1.0 / (x * x));
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

// First-passage time to 0 of a unit Brownian bridge from a > 0 to +-c over [0, h],
// given that it passes: inverts the closed-form conditional CDF by bisection.
double sample_hit_time(double a, double c, double h, double u) {
    const auto cdf = [&](double s) {
        const double rest = h - s;
        const double sd = std::sqrt(s * rest / h);
        const double m = (a * rest - c * s) / h;
        const double m2 = -(a * rest + c * s) / h;
        return 1.0 - normal_cdf(m / sd) + std::exp(2.0 * a * c / h + log_normal_cdf(m2 / sd));
    };
    double lo = 0.0;
    double hi = h;
    for (int i = 0; i < 52; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (cdf(mid) < u) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

class PathSampler {
public:
    PathSampler(const SimulationConfig& config, std::vector<double> log_barriers)
        : rng_(config.seed),
          config_(config),
          log_barriers_(std::move(log_barriers)),
          x_start_(std::log(config.spot)),
          nu_(config.params.r - config.params.gamma_s - 0.5 * config.params.sigma * config.params.sigma),
          levels_(std::countr_zero(static_cast<unsigned>(config.steps_per_year))),
          w_(static_cast<std::size_t>(config.steps_per_year) + 1) {}

    double default_time(std::uint64_t path) const {
        const double lambda = config_.params.lambda_b;
        if (lambda <= 0.0) return kInf;
        return -std::log(rng_.uniform(counter(path, Stream::Default, 0, 0))) / lambda;
    }

    // First touch time of each barrier on [0, horizon] by the diffusion; kInf if none.
    void diffusion_hits(std::uint64_t path, double horizon, std::vector<double>& hits) {
        hits.assign(log_barriers_.size(), kInf);
        std::size_t first_unhit = 0;
        while (first_unhit < log_barriers_.size() && x_start_ <= log_barriers_[first_unhit]) {
            hits[first_unhit++] = 0.0;
        }
        if (first_unhit == log_barriers_.size() || !(horizon > 0.0)) return;

        const double sigma = config_.params.sigma;
        const int n = config_.steps_per_year;
        const double h = 1.0 / n;
        const auto years = static_cast<std::uint32_t>(std::ceil(horizon));
        double w_year = 0.0;
        for (std::uint32_t y = 0; y < years; ++y) {
            w_[0] = w_year;
            w_[n] = w_year + rng_.normal(counter(path, Stream::Root, 0, y));
            for (int l = 1; l <= levels_; ++l) {
                const int span = n >> l;
                const double sd = std::sqrt(0.5 * span * h);
                for (int k = 0; k < (1 << (l - 1)); ++k) {
                    const int idx = span * (2 * k + 1);
                    const auto key = (y << l) + static_cast<std::uint32_t>(2 * k + 1);
                    w_[idx] = 0.5 * (w_[idx - span] + w_[idx + span]) +
                              sd * rng_.normal(counter(path, Stream::Midpoint, static_cast<std::uint32_t>(l), key));
                }
            }
            for (int i = 0; i < n; ++i) {
                const double t0 = y + i * h;
                if (t0 >= horizon) return;
                const auto step = y * static_cast<std::uint32_t>(n) + static_cast<std::uint32_t>(i);
                double t1 = t0 + h;
                double w1 = w_[i + 1];
                if (t1 > horizon) {
                    const double frac = (horizon - t0) / h;
                    w1 = w_[i] + frac * (w1 - w_[i]) +
                         std::sqrt((horizon - t0) * (t1 - horizon) / h) * rng_.normal(counter(path, Stream::Cut, 0, step));
                    t1 = horizon;
                }
                const double x0 = x_start_ + nu_ * t0 + sigma * w_[i];
                const double x1 = x_start_ + nu_ * t1 + sigma * w1;
                if (check_interval(path, step, t0, t1, x0, x1, first_unhit, hits)) return;
            }
            w_year = w_[n];
        }
    }

private:
    static Philox::Block counter(std::uint64_t path, Stream stream, std::uint32_t level, std::uint32_t index) {
        return {static_cast<std::uint32_t>(path), static_cast<std::uint32_t>(path >> 32),
                (static_cast<std::uint32_t>(stream) << 24) | level, index};
    }

    // Returns true once every barrier has been touched.
    bool check_interval(std::uint64_t path, std::uint32_t step, double t0, double t1, double x0, double x1,
                        std::size_t& first_unhit, std::vector<double>& hits) const {
        const double sigma = config_.params.sigma;
        const double dt = t1 - t0;
        double u_decide = -1.0;
        double u_time = -1.0;
        // Barriers are descending, so once one is not touched the lower ones are not either;
        // a single uniform per interval keeps the touches consistent across barriers.
        for (std::size_t k = first_unhit; k < log_barriers_.size(); ++k) {
            const double beta = log_barriers_[k];
            const bool crossed = x1 <= beta;
            if (!crossed) {
                if (!config_.bridge_correction) break;
                const double p = std::exp(-2.0 * (x0 - beta) * (x1 - beta) / (sigma * sigma * dt));
                if (u_decide < 0.0) u_decide = rng_.uniform(counter(path, Stream::Decide, 0, step));
                if (!(u_decide < p)) break;
            }
            double t_hit = t1;
            if (config_.bridge_correction) {
                if (u_time < 0.0) u_time = rng_.uniform(counter(path, Stream::HitTime, 0, step));
                t_hit = t0 + sample_hit_time((x0 - beta) / sigma, std::abs(x1 - beta) / sigma, dt, u_time);
            }
            hits[k] = t_hit;
            first_unhit = k + 1;
        }
        return first_unhit == log_barriers_.size();
    }

    Philox rng_;
    const SimulationConfig& config_;
    std::vector<double> log_barriers_;
    double x_start_;
    double nu_;
    int levels_;
    std::vector<double> w_;
};

struct Moments {
    double sum = 0.0;
    double sum_sq = 0.0;
};

void validate(const SimulationConfig& config, double maturity) {
    config.params.validate();
    if (config.n_paths < 10000) throw ValidationError("n_paths must be at least 10^4");
    const int n = config.steps_per_year;
    if (n < 1 || n > (1 << kMaxLevel) || (n & (n - 1)) != 0) {
        throw ValidationError("steps_per_year must be a power of two up to 2^20");
    }
    if (!(config.spot > 0.0)) throw ValidationError("spot must be > 0");
    if (!(maturity > 0.0) || maturity > 1000.0) throw ValidationError("maturity must lie in (0, 1000]");
}

}  // namespace

Philox::Block Philox::operator()(Block c) const {
    auto k = key_;
    for (int round = 0; round < 10; ++round) {
        const std::uint64_t p0 = static_cast<std::uint64_t>(kM0) * c[0];
        const std::uint64_t p1 = static_cast<std::uint64_t>(kM1) * c[2];
        c = {static_cast<std::uint32_t>(p1 >> 32) ^ c[1] ^ k[0], static_cast<std::uint32_t>(p1),
             static_cast<std::uint32_t>(p0 >> 32) ^ c[3] ^ k[1], static_cast<std::uint32_t>(p0)};
        k[0] += kW0;
        k[1] += kW1;
    }
    return c;
}

double Philox::uniform(Block counter) const {
    const auto b = (*this)(counter);
    return to_unit(b[0], b[1]);
}

double Philox::normal(Block counter) const {
    const auto b = (*this)(counter);
    const double u1 = to_unit(b[0], b[1]);
    const double u2 = to_unit(b[2], b[3]);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::vector<McEstimate> price_claims(const std::vector<Claim>& claims, const SimulationConfig& config,
                                     double maturity) {
    validate(config, maturity);

    // Distinct barriers, descending, and each claim's slot in that list.
    std::vector<double> barriers;
    bool diffusion_always = false;
    const auto check_barrier = [](double b) {
        if (!(b > 0.0) || !std::isfinite(b)) throw ValidationError("barrier must be > 0");
    };
    for (const auto& claim : claims) {
        if (const auto* c = std::get_if<OneTouchClaim>(&claim)) {
            check_barrier(c->barrier);
            barriers.push_back(c->barrier);
            diffusion_always = true;
        } else if (const auto* c = std::get_if<NoTouchRebateClaim>(&claim)) {
            check_barrier(c->barrier);
            if (!std::isfinite(c->rebate)) throw ValidationError("rebate must be finite");
            barriers.push_back(c->barrier);
            diffusion_always = true;
        } else if (const auto* c = std::get_if<DefaultPayoutClaim>(&claim)) {
            if (!c->payout) throw ValidationError("default payout needs a function");
        } else {
            for (const auto& p : std::get<ProgressiveClaim>(claim).pairs) {
                check_barrier(p.barrier);
                if (!(p.loss >= 0.0)) throw ValidationError("loss must be >= 0");
                barriers.push_back(p.barrier);
            }
        }
    }
    std::sort(barriers.begin(), barriers.end(), std::greater<>());
    barriers.erase(std::unique(barriers.begin(), barriers.end()), barriers.end());
    const auto slot = [&](double b) {
        return static_cast<std::size_t>(std::find(barriers.begin(), barriers.end(), b) - barriers.begin());
    };
    std::vector<double> log_barriers;
    for (double b : barriers) log_barriers.push_back(std::log(b));

    const double r = config.params.r;
    const std::size_t n_claims = claims.size();
    const std::size_t n_blocks = (config.n_paths + kBlockPaths - 1) / kBlockPaths;
    std::vector<Moments> moments(n_blocks * n_claims);

    const auto run_block = [&](PathSampler& sampler, std::size_t block, std::vector<double>& hits) {
        Moments* out = &moments[block * n_claims];
        const std::size_t begin = block * kBlockPaths;
        const std::size_t end = std::min(config.n_paths, begin + kBlockPaths);
        for (std::size_t path = begin; path < end; ++path) {
            const double tau = sampler.default_time(path);
            const bool defaulted = tau <= maturity;
            if (diffusion_always || (defaulted && !barriers.empty())) {
                sampler.diffusion_hits(path, std::min(maturity, tau), hits);
            } else {
                hits.assign(barriers.size(), kInf);
            }
            if (defaulted) {
                for (double& t : hits) t = std::min(t, tau);
            }
            for (std::size_t c = 0; c < n_claims; ++c) {
                double payoff = 0.0;
                const auto& claim = claims[c];
                if (const auto* ot = std::get_if<OneTouchClaim>(&claim)) {
                    const double t = hits[slot(ot->barrier)];
                    if (t <= maturity) payoff = std::exp(-r * (ot->pay_at == PayAt::Hit ? t : maturity));
                } else if (const auto* nt = std::get_if<NoTouchRebateClaim>(&claim)) {
                    if (!(hits[slot(nt->barrier)] <= maturity)) payoff = nt->rebate * std::exp(-r * maturity);
                } else if (const auto* dp = std::get_if<DefaultPayoutClaim>(&claim)) {
                    if (defaulted) payoff = dp->payout(tau) * std::exp(-r * tau);
                } else if (defaulted) {
                    for (const auto& p : std::get<ProgressiveClaim>(claim).pairs) {
                        payoff += p.loss * std::exp(-r * hits[slot(p.barrier)]);
                    }
                }
                out[c].sum += payoff;
                out[c].sum_sq += payoff * payoff;
            }
        }
    };

    unsigned threads = config.threads ? config.threads : std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, n_blocks));
    std::atomic<std::size_t> next{0};
    const auto worker = [&] {
        PathSampler sampler(config, log_barriers);
        std::vector<double> hits;
        for (std::size_t b = next++; b < n_blocks; b = next++) run_block(sampler, b, hits);
    };
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);
    }

    // Fixed reduction order: blocks in index order.
    std::vector<McEstimate> out(n_claims);
    const auto n = static_cast<double>(config.n_paths);
    for (std::size_t c = 0; c < n_claims; ++c) {
        double sum = 0.0;
        double sum_sq = 0.0;
        for (std::size_t b = 0; b < n_blocks; ++b) {
            sum += moments[b * n_claims + c].sum;
            sum_sq += moments[b * n_claims + c].sum_sq;
        }
        const double mean = sum / n;
        const double var = std::max(0.0, (sum_sq - sum * mean) / (n - 1.0));
        out[c] = {mean, std::sqrt(var / n)};
    }
    return out;
}

McEstimate price_claim(const Claim& claim, const SimulationConfig& config, double maturity) {
    return price_claims({claim}, config, maturity).front();
}

}  // namespace dva
