#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace lev {

/// Ordinates at the Fourier frequencies 2*pi*j/T, j = 1..floor(T/2).
struct Periodogram {
    std::vector<double> frequencies;
    std::vector<double> ordinates;
    std::size_t length = 0;  // T of the source series

    [[nodiscard]] std::size_t size() const noexcept { return ordinates.size(); }
};

/// I(lambda_j) = |sum_t x_t exp(-i lambda_j t)|^2 / (2 pi T) of the mean-centred
/// series. Requires T >= 8.
[[nodiscard]] Periodogram periodogram(std::span<const double> x);

/// floor(T^0.6), clamped to floor(T/2). Exact powers such as 1024^0.6 = 64 are
/// not lost to floating-point underrun.
[[nodiscard]] std::size_t bandwidth(std::size_t length);

enum class HurstMethod { LocalWhittle, Gph, Average };

[[nodiscard]] std::string_view to_string(HurstMethod method);

struct HurstEstimate {
    double h = 0.5;
    double standard_error = 0.0;  // not defined (0) for averages
    HurstMethod method = HurstMethod::LocalWhittle;
    std::size_t bandwidth = 0;
    std::size_t series_length = 0;
    bool at_boundary = false;     // local Whittle optimum hit the search bracket
    std::size_t excluded = 0;     // zero ordinates skipped by GPH

    [[nodiscard]] double d() const noexcept { return h - 0.5; }

    friend bool operator==(const HurstEstimate&, const HurstEstimate&) = default;
};

inline constexpr double kWhittleLower = 0.01;
inline constexpr double kWhittleUpper = 1.49;

/// Local Whittle objective
///   R(H) = log(mean_j lambda_j^(2H-1) I_j) - (2H-1) mean_j log lambda_j
/// over the first m ordinates. Exposed for testing; the estimator minimises it.
[[nodiscard]] double whittle_objective(const Periodogram& p, std::size_t m, double h);

/// Local Whittle estimate, minimised over [0.01, 1.49] to 1e-5 in H. The
/// standard error is the asymptotic 1/(2 sqrt(m)). Requires 4 <= m <= T/2.
[[nodiscard]] HurstEstimate local_whittle(const Periodogram& p, std::size_t m);

/// Log-periodogram regression of log I_j on log(4 sin^2(lambda_j/2)) with
/// intercept; H = 0.5 - slope and the standard error is the OLS slope error.
/// Zero ordinates are skipped and counted in `excluded`.
[[nodiscard]] HurstEstimate gph(const Periodogram& p, std::size_t m);

/// Mean of a local Whittle and a GPH estimate computed on the same series
/// with the same bandwidth; anything else throws std::invalid_argument.
[[nodiscard]] HurstEstimate average_hurst(const HurstEstimate& a, const HurstEstimate& b);

}  // namespace lev
