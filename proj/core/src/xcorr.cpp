#include "lev/xcorr.hpp"

#include "fft.hpp"
#include "lev/random.hpp"
#include "lev/series.hpp"
#include "parallel.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace lev {

namespace {

// Prefix sums of a profile X: sum X_t, sum t X_t, sum X_t^2.
struct ProfileSums {
    std::vector<long double> level;
    std::vector<long double> moment;
    std::vector<long double> square;

    explicit ProfileSums(std::span<const double> prof)
        : level(prof.size() + 1, 0.0L), moment(prof.size() + 1, 0.0L), square(prof.size() + 1, 0.0L) {
        for (std::size_t t = 0; t < prof.size(); ++t) {
            const long double v = prof[t];
            level[t + 1] = level[t] + v;
            moment[t + 1] = moment[t] + static_cast<long double>(t) * v;
            square[t + 1] = square[t] + v * v;
        }
    }
};

std::vector<long double> cross_prefix(std::span<const double> a, std::span<const double> b) {
    std::vector<long double> out(a.size() + 1, 0.0L);
    for (std::size_t t = 0; t < a.size(); ++t) {
        out[t + 1] = out[t] + static_cast<long double>(a[t]) * static_cast<long double>(b[t]);
    }
    return out;
}

struct Moments {
    double xx = 0.0;
    double yy = 0.0;
    double xy = 0.0;
};

// Average over all length-s windows of the mean product of linear-fit residuals.
Moments dcca_moments(const ProfileSums& x, const ProfileSums& y, const std::vector<long double>& xy,
                     std::size_t s) {
    const std::size_t n = x.level.size() - 1;
    const std::size_t windows = n - s + 1;
    const long double sl = static_cast<long double>(s);
    const long double ubar = (sl - 1.0L) / 2.0L;
    const long double suu = sl * (sl * sl - 1.0L) / 12.0L;
    long double axx = 0.0L, ayy = 0.0L, axy = 0.0L;
    for (std::size_t a = 0; a < windows; ++a) {
        const std::size_t b = a + s;
        const long double al = static_cast<long double>(a);
        const long double sx = x.level[b] - x.level[a];
        const long double sy = y.level[b] - y.level[a];
        const long double cux = (x.moment[b] - x.moment[a]) - al * sx - ubar * sx;
        const long double cuy = (y.moment[b] - y.moment[a]) - al * sy - ubar * sy;
        const long double cxx = (x.square[b] - x.square[a]) - sx * sx / sl;
        const long double cyy = (y.square[b] - y.square[a]) - sy * sy / sl;
        const long double cxy = (xy[b] - xy[a]) - sx * sy / sl;
        axx += cxx - cux * cux / suu;
        ayy += cyy - cuy * cuy / suu;
        axy += cxy - cux * cuy / suu;
    }
    const long double norm = sl * static_cast<long double>(windows);
    // Residual sums of squares cannot be negative; clamp rounding noise.
    return {static_cast<double>(std::max(axx / norm, 0.0L)), static_cast<double>(std::max(ayy / norm, 0.0L)),
            static_cast<double>(axy / norm)};
}

void check_dcca(std::size_t n, std::size_t s) {
    if (s < 4) throw std::invalid_argument("DCCA window must be at least 4");
    if (n < 2 * s) {
        throw std::invalid_argument("DCCA requires T >= 2s (T=" + std::to_string(n) + ", s=" +
                                    std::to_string(s) + ")");
    }
}

void check_dma(std::size_t n, std::size_t lambda) {
    if (lambda < 3) throw std::invalid_argument("DMA window must be at least 3");
    if (n < 2 * lambda) {
        throw std::invalid_argument("DMA requires T >= 2 lambda (T=" + std::to_string(n) +
                                    ", lambda=" + std::to_string(lambda) + ")");
    }
}

void check_pair(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw std::invalid_argument("series lengths differ");
}

Moments dcca_moments(std::span<const double> x, std::span<const double> y, std::size_t s) {
    check_pair(x, y);
    check_dcca(x.size(), s);
    const auto px = profile(x);
    const auto py = profile(y);
    return dcca_moments(ProfileSums(px), ProfileSums(py), cross_prefix(px, py), s);
}

Moments residual_moments(const std::vector<double>& rx, const std::vector<double>& ry) {
    long double axx = 0.0L, ayy = 0.0L, axy = 0.0L;
    for (std::size_t i = 0; i < rx.size(); ++i) {
        axx += static_cast<long double>(rx[i]) * rx[i];
        ayy += static_cast<long double>(ry[i]) * ry[i];
        axy += static_cast<long double>(rx[i]) * ry[i];
    }
    const auto n = static_cast<long double>(rx.size());
    return {static_cast<double>(axx / n), static_cast<double>(ayy / n), static_cast<double>(axy / n)};
}

Moments dma_moments(std::span<const double> x, std::span<const double> y, std::size_t lambda,
                    MaAlignment align) {
    check_pair(x, y);
    check_dma(x.size(), lambda);
    return residual_moments(dma_residuals(profile(x), lambda, align), dma_residuals(profile(y), lambda, align));
}

double ratio(const Moments& m) {
    if (!(m.xx > 0.0) || !(m.yy > 0.0)) {
        throw std::domain_error("detrended fluctuation is zero (constant or linear-profile series)");
    }
    return m.xy / (std::sqrt(m.xx) * std::sqrt(m.yy));
}

// Holds everything about the fixed series x so that each surrogate of y costs
// one inverse FFT plus an O(T) pass.
class CoefficientKernel {
public:
    CoefficientKernel(std::span<const double> x, XCorrMethod method, std::size_t window, MaAlignment align)
        : method_(method), window_(window), align_(align), x_profile_(profile(x)), x_sums_(x_profile_) {
        if (method_ == XCorrMethod::Dmca) x_resid_ = dma_residuals(x_profile_, window_, align_);
    }

    double operator()(std::span<const double> y) const {
        const auto py = profile(y);
        if (method_ == XCorrMethod::Dcca) {
            return ratio(dcca_moments(x_sums_, ProfileSums(py), cross_prefix(x_profile_, py), window_));
        }
        return ratio(residual_moments(x_resid_, dma_residuals(py, window_, align_)));
    }

private:
    XCorrMethod method_;
    std::size_t window_;
    MaAlignment align_;
    std::vector<double> x_profile_;
    ProfileSums x_sums_;
    std::vector<double> x_resid_;
};

}  // namespace

std::string_view to_string(XCorrMethod method) {
    return method == XCorrMethod::Dcca ? "dcca" : "dmca";
}

double dfa_fluctuation(std::span<const double> x, std::size_t s) { return dcca_moments(x, x, s).xx; }

double dcca_covariance(std::span<const double> x, std::span<const double> y, std::size_t s) {
    return dcca_moments(x, y, s).xy;
}

XCorrEstimate rho_dcca(std::span<const double> x, std::span<const double> y, std::size_t s) {
    XCorrEstimate est;
    est.method = XCorrMethod::Dcca;
    est.window = s;
    est.coefficient = ratio(dcca_moments(x, y, s));
    return est;
}

std::vector<double> dma_residuals(std::span<const double> prof, std::size_t lambda, MaAlignment align) {
    if (lambda < 1 || lambda > prof.size()) throw std::invalid_argument("dma_residuals: bad window");
    std::size_t left = (lambda - 1) / 2;
    if (lambda % 2 == 0 && align == MaAlignment::LeftHeavy) left = lambda / 2;
    const std::size_t right = lambda - 1 - left;

    std::vector<long double> prefix(prof.size() + 1, 0.0L);
    for (std::size_t t = 0; t < prof.size(); ++t) prefix[t + 1] = prefix[t] + prof[t];

    const std::size_t first = left;
    const std::size_t last = prof.size() - 1 - right;
    std::vector<double> out;
    out.reserve(last - first + 1);
    const long double inv = 1.0L / static_cast<long double>(lambda);
    for (std::size_t t = first; t <= last; ++t) {
        const long double avg = (prefix[t + right + 1] - prefix[t - left]) * inv;
        out.push_back(static_cast<double>(prof[t] - avg));
    }
    return out;
}

double dma_fluctuation(std::span<const double> x, std::size_t lambda, MaAlignment align) {
    return dma_moments(x, x, lambda, align).xx;
}

double dmca_covariance(std::span<const double> x, std::span<const double> y, std::size_t lambda,
                       MaAlignment align) {
    return dma_moments(x, y, lambda, align).xy;
}

XCorrEstimate rho_dmca(std::span<const double> x, std::span<const double> y, std::size_t lambda,
                       MaAlignment align) {
    XCorrEstimate est;
    est.method = XCorrMethod::Dmca;
    est.window = lambda;
    est.coefficient = ratio(dma_moments(x, y, lambda, align));
    return est;
}

XCorrEstimate detrended_xcorr(std::span<const double> x, std::span<const double> y, XCorrMethod method,
                              std::size_t window, MaAlignment align) {
    return method == XCorrMethod::Dcca ? rho_dcca(x, y, window) : rho_dmca(x, y, window, align);
}

// --- surrogates -------------------------------------------------------------

struct FourierSurrogate::Impl {
    detail::RealFft fft;
    std::vector<std::complex<double>> spectrum;
    std::vector<std::complex<double>> scratch;

    explicit Impl(std::span<const double> x) : fft(x.size()) { fft.forward(x, spectrum); }
};

FourierSurrogate::FourierSurrogate(std::span<const double> x) {
    if (x.size() < 8) throw std::invalid_argument("fourier_surrogate requires T >= 8");
    impl_ = std::make_unique<Impl>(x);
}

FourierSurrogate::~FourierSurrogate() = default;
FourierSurrogate::FourierSurrogate(FourierSurrogate&&) noexcept = default;
FourierSurrogate& FourierSurrogate::operator=(FourierSurrogate&&) noexcept = default;

void FourierSurrogate::generate(std::uint64_t seed, std::vector<double>& out) {
    auto& im = *impl_;
    const std::size_t n = im.fft.size();
    // Bins 1..ceil(n/2)-1 get random phases; bin 0 and (even n) bin n/2 stay real.
    const std::size_t last_random = (n % 2 == 0) ? n / 2 - 1 : n / 2;
    Rng rng(seed);
    std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
    im.scratch = im.spectrum;
    for (std::size_t k = 1; k <= last_random; ++k) {
        im.scratch[k] *= std::polar(1.0, phase(rng));
    }
    im.fft.inverse(im.scratch, out);
    const double inv = 1.0 / static_cast<double>(n);
    for (double& v : out) v *= inv;
}

std::vector<double> FourierSurrogate::generate(std::uint64_t seed) {
    std::vector<double> out;
    generate(seed, out);
    return out;
}

std::vector<double> fourier_surrogate(std::span<const double> x, std::uint64_t seed) {
    return FourierSurrogate(x).generate(seed);
}

double surrogate_pvalue(std::span<const double> x, std::span<const double> y, XCorrMethod method,
                        std::size_t window, std::size_t n_surrogates, std::uint64_t seed, MaAlignment align) {
    if (n_surrogates < 100) throw std::invalid_argument("surrogate_pvalue requires at least 100 surrogates");
    check_pair(x, y);
    const double observed = std::abs(detrended_xcorr(x, y, method, window, align).coefficient);
    const CoefficientKernel kernel(x, method, window, align);

    std::vector<unsigned char> exceed(n_surrogates, 0);
    detail::parallel_chunks(n_surrogates, [&](std::size_t begin, std::size_t end) {
        FourierSurrogate gen(y);
        std::vector<double> ys;
        for (std::size_t i = begin; i < end; ++i) {
            gen.generate(derive_seed(seed, i), ys);
            exceed[i] = std::abs(kernel(ys)) >= observed ? 1 : 0;
        }
    });
    std::size_t count = 0;
    for (auto e : exceed) count += e;
    return static_cast<double>(count + 1) / static_cast<double>(n_surrogates + 1);
}

XCorrEstimate xcorr_with_significance(std::span<const double> x, std::span<const double> y, XCorrMethod method,
                                      std::size_t window, std::size_t n_surrogates, std::uint64_t seed,
                                      MaAlignment align) {
    auto est = detrended_xcorr(x, y, method, window, align);
    est.p_value = surrogate_pvalue(x, y, method, window, n_surrogates, seed, align);
    est.surrogates = n_surrogates;
    est.seed = seed;
    return est;
}

}  // namespace lev
