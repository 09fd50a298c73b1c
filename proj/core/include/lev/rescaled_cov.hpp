#pragma once

#include "lev/lrd_tests.hpp"
#include "lev/random.hpp"
#include "lev/spectral.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace lev {

struct RctConfig {
    std::size_t lag = 1;
    std::size_t block_length = 0;  // 0 selects floor(sqrt(T))
    std::size_t replicas = 1000;
    std::uint64_t seed = 0;
};

/// Block length actually used for a series of length T.
[[nodiscard]] std::size_t effective_block_length(const RctConfig& cfg, std::size_t length);

/// Throws std::invalid_argument unless block length is in [2, T/4] and B >= 100.
void validate(const RctConfig& cfg, std::size_t length);

struct RctHurst {
    double h = 0.5;
    bool long_memory = false;  // both univariate tests reject at 5%
    TestResult modified_rs;
    TestResult rescaled_variance;
    std::optional<HurstEstimate> local_whittle;
    std::optional<HurstEstimate> gph;
};

/// The exponent plugged into the rescaled covariance statistic: the average
/// of the local Whittle and GPH estimates (bandwidth floor(T^0.6)) when both
/// the modified R/S and rescaled variance tests reject at 5% with lag q,
/// otherwise 0.5.
[[nodiscard]] RctHurst hurst_for_rct(std::span<const double> x, std::size_t q);

/// q^(Hx+Hy-1) * Cov(X, Y) / (T * s_xy,q) with X, Y the profiles and s_xy,q the
/// Bartlett HAC cross-covariance. Requires q >= 1; throws std::domain_error
/// when s_xy,q == 0.
[[nodiscard]] double rescaled_covariance_stat(std::span<const double> x, std::span<const double> y,
                                              std::size_t q, double hx, double hy);

/// Indices of one overlapping moving-block resample of length n.
[[nodiscard]] std::vector<std::size_t> moving_block_indices(std::size_t n, std::size_t block, Rng& rng);

struct RctResult {
    TestResult test;
    std::size_t redraws = 0;
    std::vector<double> null_sample;  // bootstrap statistics, replica order
};

/// Two-sided moving-block bootstrap p-value of the rescaled covariance
/// statistic. x and y are resampled independently with overlapping blocks,
/// which removes cross-dependence while keeping each series' short-range
/// autocorrelation. Replica i draws from derive_seed(seed, i, attempt);
/// a replica whose HAC cross-covariance is exactly zero is redrawn, with at
/// most 10*B redraws in total.
[[nodiscard]] RctResult rct_bootstrap(std::span<const double> x, std::span<const double> y,
                                      const RctConfig& cfg, double hx = 0.5, double hy = 0.5);

[[nodiscard]] TestResult rct_pvalue(std::span<const double> x, std::span<const double> y,
                                    const RctConfig& cfg, double hx = 0.5, double hy = 0.5);

}  // namespace lev
