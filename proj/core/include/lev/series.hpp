#pragma once

#include <chrono>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace lev {

using Date = std::chrono::year_month_day;

/// Parses an ISO-8601 calendar date (YYYY-MM-DD). Throws std::invalid_argument.
[[nodiscard]] Date parse_date(std::string_view text);
[[nodiscard]] std::string format_date(const Date& date);

struct OhlcBar {
    Date date;
    double open = 0.0;
    double high = 0.0;
    double low = 0.0;
    double close = 0.0;
};

using OhlcSeries = std::vector<OhlcBar>;

/// Empty string when the bar is valid, otherwise a short description of the violation.
[[nodiscard]] std::string bar_violation(const OhlcBar& bar);

/// Throws std::invalid_argument naming the first offending bar index. Also
/// requires strictly increasing dates.
void validate(std::span<const OhlcBar> bars);

enum class SeriesKind { RawReturns, StandardizedReturns, LogVolatility, Profile, Generic };

[[nodiscard]] std::string_view to_string(SeriesKind kind);

struct Series {
    SeriesKind kind = SeriesKind::Generic;
    std::vector<double> values;

    [[nodiscard]] std::size_t size() const noexcept { return values.size(); }
    [[nodiscard]] std::span<const double> view() const noexcept { return values; }
};

/// r_t = log(C_t) - log(O_t). Throws std::invalid_argument on a non-positive
/// open or close, naming the bar index.
[[nodiscard]] Series open_close_returns(std::span<const OhlcBar> bars);

/// Cumulative sum of the demeaned series. The last element is zero up to rounding.
[[nodiscard]] std::vector<double> profile(std::span<const double> x);
[[nodiscard]] Series profile(const Series& x);

[[nodiscard]] double mean(std::span<const double> x);

/// Sample autocorrelation at lag k, normalised by the lag-0 sum of squares.
[[nodiscard]] double autocorrelation(std::span<const double> x, std::size_t k);

struct StatsReport {
    double mean = 0.0;
    double sd = 0.0;
    double skewness = 0.0;
    double excess_kurtosis = 0.0;
    double jarque_bera = 0.0;
    double jarque_bera_p = 1.0;
    double ljung_box = 0.0;
    double ljung_box_p = 1.0;
    std::size_t lags = 0;
    std::size_t length = 0;

    friend bool operator==(const StatsReport&, const StatsReport&) = default;
};

/// Moment statistics plus Jarque-Bera and Ljung-Box Q(lags).
///
/// Skewness and excess kurtosis are the biased moment ratios m3/m2^1.5 and
/// m4/m2^2 - 3; sd uses the n-1 divisor. Jarque-Bera is compared with a
/// chi-squared(2) law and Q(lags) with chi-squared(lags).
///
/// Throws std::invalid_argument unless size() > lags >= 1, and
/// std::domain_error when the series has zero variance.
[[nodiscard]] StatsReport describe(std::span<const double> x, std::size_t lags = 30);

}  // namespace lev
