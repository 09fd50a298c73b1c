#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace lev {

enum class XCorrMethod { Dcca, Dmca };

[[nodiscard]] std::string_view to_string(XCorrMethod method);

struct XCorrEstimate {
    double coefficient = 0.0;
    XCorrMethod method = XCorrMethod::Dcca;
    std::size_t window = 0;
    std::optional<double> p_value;
    std::size_t surrogates = 0;
    std::uint64_t seed = 0;

    friend bool operator==(const XCorrEstimate&, const XCorrEstimate&) = default;
};

/// Placement of an even-length centred moving average. LeftHeavy averages
/// t-λ/2 .. t+λ/2-1 (for λ=20: t-10..t+9); odd windows are symmetric either way.
enum class MaAlignment { LeftHeavy, RightHeavy };

// --- DFA / DCCA -----------------------------------------------------------
//
// Both profiles are split into every window of s consecutive points (step 1).
// A least-squares line is removed from each profile inside each window, and
// the mean residual product is averaged over windows.

/// Squared DFA fluctuation F^2_DFA(s). Requires s >= 4 and T >= 2s.
[[nodiscard]] double dfa_fluctuation(std::span<const double> x, std::size_t s);

/// Detrended covariance F^2_DCCA(s); may be negative.
[[nodiscard]] double dcca_covariance(std::span<const double> x, std::span<const double> y, std::size_t s);

/// F^2_DCCA / (F_DFA,x F_DFA,y), in [-1, 1]. Throws std::domain_error when
/// either series has zero detrended fluctuation.
[[nodiscard]] XCorrEstimate rho_dcca(std::span<const double> x, std::span<const double> y, std::size_t s);

// --- DMA / DMCA -----------------------------------------------------------

/// Profile minus its centred moving average of length lambda, at every
/// position where the window fits inside the sample. Operates on a profile
/// directly (no demeaning or cumulation).
[[nodiscard]] std::vector<double> dma_residuals(std::span<const double> profile, std::size_t lambda,
                                                MaAlignment align = MaAlignment::LeftHeavy);

/// Squared DMA fluctuation. Requires lambda >= 3 and T >= 2 lambda.
[[nodiscard]] double dma_fluctuation(std::span<const double> x, std::size_t lambda,
                                     MaAlignment align = MaAlignment::LeftHeavy);

[[nodiscard]] double dmca_covariance(std::span<const double> x, std::span<const double> y,
                                     std::size_t lambda, MaAlignment align = MaAlignment::LeftHeavy);

[[nodiscard]] XCorrEstimate rho_dmca(std::span<const double> x, std::span<const double> y,
                                     std::size_t lambda, MaAlignment align = MaAlignment::LeftHeavy);

[[nodiscard]] XCorrEstimate detrended_xcorr(std::span<const double> x, std::span<const double> y,
                                            XCorrMethod method, std::size_t window,
                                            MaAlignment align = MaAlignment::LeftHeavy);

// --- Fourier surrogates ---------------------------------------------------

/// Phase-randomised copies of one series. The spectrum is computed once; each
/// call to generate() draws fresh uniform phases for the positive frequencies,
/// keeping the zero-frequency (and Nyquist) bins untouched, so every
/// periodogram ordinate and the sample mean are preserved.
///
/// Not thread-safe: use one instance per thread.
class FourierSurrogate {
public:
    explicit FourierSurrogate(std::span<const double> x);
    ~FourierSurrogate();
    FourierSurrogate(FourierSurrogate&&) noexcept;
    FourierSurrogate& operator=(FourierSurrogate&&) noexcept;

    [[nodiscard]] std::vector<double> generate(std::uint64_t seed);
    void generate(std::uint64_t seed, std::vector<double>& out);

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// One-off surrogate of x. Requires T >= 8.
[[nodiscard]] std::vector<double> fourier_surrogate(std::span<const double> x, std::uint64_t seed);

/// Two-sided surrogate p-value for the detrended coefficient: y is phase
/// randomised N times (x kept fixed) and
///   p = (#{|rho*| >= |rho|} + 1) / (N + 1).
/// Replica i uses derive_seed(seed, i), so the result is independent of
/// evaluation order. Requires N >= 100.
[[nodiscard]] double surrogate_pvalue(std::span<const double> x, std::span<const double> y,
                                      XCorrMethod method, std::size_t window, std::size_t n_surrogates,
                                      std::uint64_t seed, MaAlignment align = MaAlignment::LeftHeavy);

/// Coefficient together with its surrogate p-value.
[[nodiscard]] XCorrEstimate xcorr_with_significance(std::span<const double> x, std::span<const double> y,
                                                    XCorrMethod method, std::size_t window,
                                                    std::size_t n_surrogates, std::uint64_t seed,
                                                    MaAlignment align = MaAlignment::LeftHeavy);

}  // namespace lev
