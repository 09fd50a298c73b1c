#include "lev/rescaled_cov.hpp"

#include "lev/series.hpp"
#include "parallel.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace lev {

namespace {

constexpr double kLrdLevel = 0.05;

double profile_covariance(std::span<const double> x, std::span<const double> y) {
    const auto px = profile(x);
    const auto py = profile(y);
    const double mx = mean(px);
    const double my = mean(py);
    long double acc = 0.0L;
    for (std::size_t t = 0; t < px.size(); ++t) acc += (px[t] - mx) * (py[t] - my);
    return static_cast<double>(acc / static_cast<long double>(px.size()));
}

}  // namespace

std::size_t effective_block_length(const RctConfig& cfg, std::size_t length) {
    if (cfg.block_length != 0) return cfg.block_length;
    return static_cast<std::size_t>(std::floor(std::sqrt(static_cast<double>(length))));
}

void validate(const RctConfig& cfg, std::size_t length) {
    const std::size_t b = effective_block_length(cfg, length);
    if (b < 2 || b > length / 4) {
        throw std::invalid_argument("bootstrap block length " + std::to_string(b) + " outside [2, T/4] for T=" +
                                    std::to_string(length));
    }
    if (cfg.replicas < 100) throw std::invalid_argument("bootstrap needs at least 100 replicas");
}

RctHurst hurst_for_rct(std::span<const double> x, std::size_t q) {
    RctHurst out;
    out.modified_rs = modified_rs_test(x, q);
    out.rescaled_variance = rescaled_variance_test(x, q);
    out.long_memory = out.modified_rs.rejects(kLrdLevel) && out.rescaled_variance.rejects(kLrdLevel);
    if (out.long_memory) {
        const auto p = periodogram(x);
        const std::size_t m = bandwidth(x.size());
        out.local_whittle = local_whittle(p, m);
        out.gph = gph(p, m);
        out.h = average_hurst(*out.local_whittle, *out.gph).h;
    }
    return out;
}

double rescaled_covariance_stat(std::span<const double> x, std::span<const double> y, std::size_t q, double hx,
                                double hy) {
    if (x.size() != y.size()) throw std::invalid_argument("rescaled_covariance_stat: length mismatch");
    if (q < 1) throw std::invalid_argument("rescaled_covariance_stat: q must be >= 1");
    const double s = hac_covariance(x, y, q);
    if (s == 0.0) throw std::domain_error("rescaled_covariance_stat: HAC cross-covariance is zero");
    const double t = static_cast<double>(x.size());
    return std::pow(static_cast<double>(q), hx + hy - 1.0) * profile_covariance(x, y) / (t * s);
}

std::vector<std::size_t> moving_block_indices(std::size_t n, std::size_t block, Rng& rng) {
    if (block < 1 || block > n) throw std::invalid_argument("moving_block_indices: bad block length");
    std::uniform_int_distribution<std::size_t> start(0, n - block);
    std::vector<std::size_t> idx;
    idx.reserve(n + block);
    while (idx.size() < n) {
        const std::size_t s = start(rng);
        for (std::size_t j = 0; j < block; ++j) idx.push_back(s + j);
    }
    idx.resize(n);
    return idx;
}

RctResult rct_bootstrap(std::span<const double> x, std::span<const double> y, const RctConfig& cfg, double hx,
                        double hy) {
    if (x.size() != y.size()) throw std::invalid_argument("rct: length mismatch");
    validate(cfg, x.size());
    const std::size_t n = x.size();
    const std::size_t block = effective_block_length(cfg, n);
    const std::size_t cap = 10 * cfg.replicas;

    RctResult out;
    out.test.kind = TestKind::RescaledCovariance;
    out.test.lag = cfg.lag;
    out.test.statistic = rescaled_covariance_stat(x, y, cfg.lag, hx, hy);

    out.null_sample.assign(cfg.replicas, 0.0);
    std::vector<std::size_t> redraws(cfg.replicas, 0);
    detail::parallel_chunks(cfg.replicas, [&](std::size_t begin, std::size_t end) {
        std::vector<double> xs(n), ys(n);
        for (std::size_t i = begin; i < end; ++i) {
            for (std::size_t attempt = 0;; ++attempt) {
                if (attempt > cap) throw std::runtime_error("rct: too many degenerate bootstrap resamples");
                Rng rng(derive_seed(cfg.seed, i, attempt));
                const auto ix = moving_block_indices(n, block, rng);
                const auto iy = moving_block_indices(n, block, rng);
                for (std::size_t t = 0; t < n; ++t) {
                    xs[t] = x[ix[t]];
                    ys[t] = y[iy[t]];
                }
                try {
                    out.null_sample[i] = rescaled_covariance_stat(xs, ys, cfg.lag, hx, hy);
                    redraws[i] = attempt;
                    break;
                } catch (const std::domain_error&) {
                }
            }
        }
    });

    for (auto r : redraws) out.redraws += r;
    if (out.redraws > cap) throw std::runtime_error("rct: redraw budget of 10*B exceeded");

    const double observed = std::abs(out.test.statistic);
    std::size_t exceed = 0;
    for (double v : out.null_sample) exceed += std::abs(v) >= observed ? 1 : 0;
    out.test.p_value = static_cast<double>(exceed + 1) / static_cast<double>(cfg.replicas + 1);
    return out;
}

TestResult rct_pvalue(std::span<const double> x, std::span<const double> y, const RctConfig& cfg, double hx,
                      double hy) {
    return rct_bootstrap(x, y, cfg, hx, hy).test;
}

}  // namespace lev
