#pragma once

#include "lev/series.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <variant>
#include <vector>

namespace lev {

/// Autocovariance of unit-variance fractional Gaussian noise,
/// 0.5 (|k+1|^2H - 2|k|^2H + |k-1|^2H).
[[nodiscard]] double fgn_autocovariance(double hurst, std::size_t lag);

/// Exact fGn sample (Davies-Harte circulant embedding). H in (0, 1), T >= 8.
[[nodiscard]] std::vector<double> gen_fgn(double hurst, std::size_t length, std::uint64_t seed);

/// ARFIMA(0, d, 0) from the MA(inf) representation with coefficients
/// psi_k = Gamma(k+d) / (Gamma(d) Gamma(k+1)), truncated at 10 T lags.
/// d in (-0.5, 0.5).
[[nodiscard]] std::vector<double> gen_arfima(double d, std::size_t length, std::uint64_t seed);

/// Two fGn series driven by mixed spectral innovations so that their
/// contemporaneous correlation is exactly `correlation`. With different H
/// the attainable |correlation| is bounded by the spectral overlap of the
/// two processes (max_pair_correlation); larger values throw.
[[nodiscard]] std::pair<std::vector<double>, std::vector<double>> gen_correlated_pair(
    double h1, double h2, double correlation, std::size_t length, std::uint64_t seed);

[[nodiscard]] double max_pair_correlation(double h1, double h2, std::size_t length);

/// How daily highs and lows are read off the simulated intraday path.
enum class ExtremeSampling {
    Continuous,  // exact extremes of the Brownian path between grid points
    Grid,        // extremes of the grid points only (biased low)
};

struct OhlcSimOptions {
    double start_price = 100.0;
    Date start_date = Date{std::chrono::year{2000}, std::chrono::January, std::chrono::day{3}};
    ExtremeSampling extremes = ExtremeSampling::Continuous;
};

/// Driftless geometric Brownian motion with daily log-variance sigma^2,
/// simulated on `steps_per_day` intraday points (>= 64). Each day opens at
/// the previous close; dates are consecutive weekdays.
[[nodiscard]] OhlcSeries gen_gbm_ohlc(double sigma_daily, std::size_t length, std::size_t steps_per_day,
                                      std::uint64_t seed, const OhlcSimOptions& options = {});

/// Stochastic-volatility bars: day t has volatility exp(log_sigma[t]) and
/// open-close log return exp(log_sigma[t]) * return_driver[t]; the intraday
/// path is a Brownian bridge pinned to that return.
[[nodiscard]] OhlcSeries gen_stochastic_vol_ohlc(std::span<const double> log_sigma,
                                                 std::span<const double> return_driver,
                                                 std::size_t steps_per_day, std::uint64_t seed,
                                                 const OhlcSimOptions& options = {});

enum class GeneratorKind { Fgn, Arfima, GbmOhlc, CorrelatedPair };

struct GeneratorSpec {
    GeneratorKind kind = GeneratorKind::Fgn;
    double hurst = 0.5;        // fGn, first series of a pair
    double hurst2 = 0.5;       // second series of a pair
    double d = 0.0;            // ARFIMA
    double sigma = 0.01;       // GBM daily volatility
    double correlation = 0.0;  // pair
    std::size_t length = 1024;
    std::size_t steps_per_day = 512;
    std::uint64_t seed = 0;
};

/// Throws std::invalid_argument when a parameter is outside its domain.
void validate(const GeneratorSpec& spec);

using Generated = std::variant<std::vector<double>, std::pair<std::vector<double>, std::vector<double>>, OhlcSeries>;

[[nodiscard]] Generated generate(const GeneratorSpec& spec);

}  // namespace lev
