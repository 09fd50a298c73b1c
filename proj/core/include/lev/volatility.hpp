#pragma once

#include "lev/series.hpp"

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace lev {

/// Garman-Klass range-based estimate of one day's variance:
///   (log(H/L))^2 / 2 - (2 log 2 - 1) (log(C/O))^2
/// The value can be zero or negative for bars with a small range and a large
/// open-close move; clean_variance() removes those.
[[nodiscard]] double garman_klass(const OhlcBar& bar);

[[nodiscard]] std::vector<double> garman_klass(std::span<const OhlcBar> bars);

struct CleanOptions {
    bool strict = false;
    double max_drop_fraction = 0.05;
};

/// Strictly positive daily variances plus the bookkeeping needed to align
/// other per-bar series with them.
struct VolatilitySeries {
    std::vector<double> gk_variance;
    std::vector<Date> dates;          // empty when no dates were supplied
    std::vector<std::size_t> kept;    // indices into the uncleaned input
    std::size_t input_size = 0;
    std::vector<std::string> warnings;

    [[nodiscard]] std::size_t size() const noexcept { return gk_variance.size(); }
    [[nodiscard]] std::size_t dropped() const noexcept { return input_size - kept.size(); }
};

/// Drops non-positive (and non-finite) entries. When more than
/// max_drop_fraction of the input is dropped a warning is recorded, or
/// std::runtime_error is thrown in strict mode.
[[nodiscard]] VolatilitySeries clean_variance(std::span<const double> variance,
                                              std::span<const Date> dates = {},
                                              const CleanOptions& options = {});

/// Selects the observations of a per-bar series that survived cleaning.
[[nodiscard]] Series align_to(const Series& per_bar, const VolatilitySeries& vs);

/// 0.5 * log(variance): the log of the daily volatility.
[[nodiscard]] Series log_volatility(const VolatilitySeries& vs);

/// r_t / sqrt(variance_t) on the cleaned index set. The returns must already be
/// aligned (see align_to); a length mismatch throws std::invalid_argument.
[[nodiscard]] Series standardize_returns(const Series& returns, const VolatilitySeries& vs);

}  // namespace lev
