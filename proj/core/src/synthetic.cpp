#include "lev/synthetic.hpp"

#include "fft.hpp"
#include "lev/random.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

namespace lev {

namespace {

void check_hurst(double h) {
    if (!(h > 0.0 && h < 1.0)) throw std::invalid_argument("fGn Hurst exponent must lie in (0, 1)");
}

void check_length(std::size_t n) {
    if (n < 8) throw std::invalid_argument("generated series need T >= 8");
}

// Eigenvalues of the 2T circulant that embeds the fGn autocovariance.
std::vector<double> circulant_eigenvalues(double hurst, std::size_t n) {
    const std::size_t m = 2 * n;
    std::vector<std::complex<double>> row(m);
    for (std::size_t k = 0; k <= n; ++k) row[k] = fgn_autocovariance(hurst, k);
    for (std::size_t k = n + 1; k < m; ++k) row[k] = row[m - k];
    detail::ComplexFft fft(m);
    fft.forward(row);
    std::vector<double> eig(m);
    double peak = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
        eig[k] = row[k].real();
        peak = std::max(peak, std::abs(eig[k]));
    }
    for (double& e : eig) {
        if (e < -1e-8 * peak) throw std::domain_error("circulant embedding is not positive definite");
        e = std::max(e, 0.0);
    }
    return eig;
}

std::vector<std::complex<double>> complex_normals(std::size_t m, Rng& rng) {
    std::normal_distribution<double> z;
    std::vector<std::complex<double>> out(m);
    for (auto& c : out) {
        const double re = z(rng);
        const double im = z(rng);
        c = {re, im};
    }
    return out;
}

// Real part of FFT(sqrt(eig / M) * innovations) has the embedded covariance.
std::vector<double> colour(const std::vector<double>& eig, std::vector<std::complex<double>> innov, std::size_t n) {
    const std::size_t m = eig.size();
    for (std::size_t k = 0; k < m; ++k) innov[k] *= std::sqrt(eig[k] / static_cast<double>(m));
    detail::ComplexFft fft(m);
    fft.forward(innov);
    std::vector<double> out(n);
    for (std::size_t t = 0; t < n; ++t) out[t] = innov[t].real();
    return out;
}

double spectral_overlap(const std::vector<double>& e1, const std::vector<double>& e2) {
    double acc = 0.0;
    for (std::size_t k = 0; k < e1.size(); ++k) acc += std::sqrt(e1[k] * e2[k]);
    return acc / static_cast<double>(e1.size());
}

Date next_weekday(Date d) {
    std::chrono::sys_days day{d};
    do {
        day += std::chrono::days{1};
    } while (std::chrono::weekday{day} == std::chrono::Saturday || std::chrono::weekday{day} == std::chrono::Sunday);
    return Date{day};
}

struct DayPath {
    double close = 0.0;  // log move from the open
    double high = 0.0;
    double low = 0.0;
};

// One day of a Brownian path with total variance `variance`. When `endpoint`
// is given the path is pinned to it (Brownian bridge).
DayPath simulate_day(Rng& rng, double variance, std::size_t steps, const double* endpoint, ExtremeSampling mode) {
    std::normal_distribution<double> z;
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double step_var = variance / static_cast<double>(steps);
    const double step_sd = std::sqrt(step_var);

    std::vector<double> path(steps + 1, 0.0);
    for (std::size_t k = 1; k <= steps; ++k) path[k] = path[k - 1] + step_sd * z(rng);
    if (endpoint != nullptr) {
        const double shift = path[steps] - *endpoint;
        for (std::size_t k = 1; k <= steps; ++k) {
            path[k] -= shift * static_cast<double>(k) / static_cast<double>(steps);
        }
    }

    DayPath day;
    day.close = path[steps];
    day.high = std::max(0.0, day.close);
    day.low = std::min(0.0, day.close);
    for (std::size_t k = 1; k <= steps; ++k) {
        const double a = path[k - 1];
        const double b = path[k];
        if (mode == ExtremeSampling::Continuous) {
            // Extremes of a Brownian bridge between consecutive grid points.
            const double gap = (b - a) * (b - a);
            const double up = 0.5 * (a + b + std::sqrt(gap - 2.0 * step_var * std::log(1.0 - u(rng))));
            const double down = 0.5 * (a + b - std::sqrt(gap - 2.0 * step_var * std::log(1.0 - u(rng))));
            day.high = std::max(day.high, up);
            day.low = std::min(day.low, down);
        } else {
            day.high = std::max(day.high, b);
            day.low = std::min(day.low, b);
        }
    }
    return day;
}

OhlcBar make_bar(const Date& date, double log_open, const DayPath& day) {
    OhlcBar bar;
    bar.date = date;
    bar.open = std::exp(log_open);
    bar.close = std::exp(log_open + day.close);
    bar.high = std::max({std::exp(log_open + day.high), bar.open, bar.close});
    bar.low = std::min({std::exp(log_open + day.low), bar.open, bar.close});
    return bar;
}

void check_steps(std::size_t steps) {
    if (steps < 64) throw std::invalid_argument("steps_per_day must be at least 64");
}

}  // namespace

double fgn_autocovariance(double hurst, std::size_t lag) {
    const double k = static_cast<double>(lag);
    const double e = 2.0 * hurst;
    return 0.5 * (std::pow(k + 1.0, e) - 2.0 * std::pow(k, e) + std::pow(std::abs(k - 1.0), e));
}

std::vector<double> gen_fgn(double hurst, std::size_t length, std::uint64_t seed) {
    check_hurst(hurst);
    check_length(length);
    const auto eig = circulant_eigenvalues(hurst, length);
    Rng rng(seed);
    return colour(eig, complex_normals(eig.size(), rng), length);
}

std::vector<double> gen_arfima(double d, std::size_t length, std::uint64_t seed) {
    if (!(d > -0.5 && d < 0.5)) throw std::invalid_argument("ARFIMA d must lie in (-0.5, 0.5)");
    check_length(length);
    const std::size_t trunc = 10 * length;
    std::vector<double> psi(trunc + 1);
    psi[0] = 1.0;
    for (std::size_t k = 1; k <= trunc; ++k) {
        psi[k] = psi[k - 1] * (static_cast<double>(k) - 1.0 + d) / static_cast<double>(k);
    }
    Rng rng(seed);
    std::normal_distribution<double> z;
    std::vector<double> eps(length + trunc);
    for (double& e : eps) e = z(rng);

    std::vector<double> out(length, 0.0);
    if (d == 0.0) {
        for (std::size_t t = 0; t < length; ++t) out[t] = eps[t + trunc];
        return out;
    }
    // Linear convolution psi * eps via zero-padded real FFTs; only the
    // outputs with a full 10T history are kept.
    std::size_t nfft = 1;
    while (nfft < psi.size() + eps.size() - 1) nfft <<= 1;
    detail::RealFft fft(nfft);
    std::vector<double> a(nfft, 0.0), b(nfft, 0.0);
    std::copy(psi.begin(), psi.end(), a.begin());
    std::copy(eps.begin(), eps.end(), b.begin());
    std::vector<std::complex<double>> fa, fb;
    fft.forward(a, fa);
    fft.forward(b, fb);
    for (std::size_t k = 0; k < fa.size(); ++k) fa[k] *= fb[k];
    std::vector<double> conv;
    fft.inverse(fa, conv);
    const double norm = 1.0 / static_cast<double>(nfft);
    for (std::size_t t = 0; t < length; ++t) out[t] = conv[t + trunc] * norm;
    return out;
}

double max_pair_correlation(double h1, double h2, std::size_t length) {
    check_hurst(h1);
    check_hurst(h2);
    check_length(length);
    return spectral_overlap(circulant_eigenvalues(h1, length), circulant_eigenvalues(h2, length));
}

std::pair<std::vector<double>, std::vector<double>> gen_correlated_pair(double h1, double h2, double correlation,
                                                                        std::size_t length, std::uint64_t seed) {
    check_hurst(h1);
    check_hurst(h2);
    check_length(length);
    if (!(correlation >= -1.0 && correlation <= 1.0)) {
        throw std::invalid_argument("pair correlation must lie in [-1, 1]");
    }
    const auto e1 = circulant_eigenvalues(h1, length);
    const auto e2 = h1 == h2 ? e1 : circulant_eigenvalues(h2, length);
    const double overlap = spectral_overlap(e1, e2);
    double mix = correlation;
    if (h1 != h2) {
        if (std::abs(correlation) > overlap) {
            throw std::invalid_argument("correlation " + std::to_string(correlation) +
                                        " not attainable; maximum for these exponents is " + std::to_string(overlap));
        }
        mix = correlation / overlap;
    }
    Rng rng(seed);
    auto z1 = complex_normals(e1.size(), rng);
    auto z2 = complex_normals(e1.size(), rng);
    const double rest = std::sqrt(std::max(0.0, 1.0 - mix * mix));
    for (std::size_t k = 0; k < z2.size(); ++k) z2[k] = mix * z1[k] + rest * z2[k];
    return {colour(e1, std::move(z1), length), colour(e2, std::move(z2), length)};
}

OhlcSeries gen_gbm_ohlc(double sigma_daily, std::size_t length, std::size_t steps_per_day, std::uint64_t seed,
                        const OhlcSimOptions& options) {
    if (!(sigma_daily >= 0.0)) throw std::invalid_argument("sigma must be non-negative");
    if (!(options.start_price > 0.0)) throw std::invalid_argument("start price must be positive");
    check_steps(steps_per_day);
    Rng rng(seed);
    OhlcSeries bars;
    bars.reserve(length);
    double log_price = std::log(options.start_price);
    Date date = options.start_date;
    for (std::size_t t = 0; t < length; ++t) {
        const auto day = simulate_day(rng, sigma_daily * sigma_daily, steps_per_day, nullptr, options.extremes);
        bars.push_back(make_bar(date, log_price, day));
        log_price += day.close;
        date = next_weekday(date);
    }
    return bars;
}

OhlcSeries gen_stochastic_vol_ohlc(std::span<const double> log_sigma, std::span<const double> return_driver,
                                   std::size_t steps_per_day, std::uint64_t seed, const OhlcSimOptions& options) {
    if (log_sigma.size() != return_driver.size()) {
        throw std::invalid_argument("volatility and return drivers differ in length");
    }
    check_steps(steps_per_day);
    Rng rng(seed);
    OhlcSeries bars;
    bars.reserve(log_sigma.size());
    double log_price = std::log(options.start_price);
    Date date = options.start_date;
    for (std::size_t t = 0; t < log_sigma.size(); ++t) {
        const double sigma = std::exp(log_sigma[t]);
        const double endpoint = sigma * return_driver[t];
        const auto day = simulate_day(rng, sigma * sigma, steps_per_day, &endpoint, options.extremes);
        bars.push_back(make_bar(date, log_price, day));
        log_price += day.close;
        date = next_weekday(date);
    }
    return bars;
}

void validate(const GeneratorSpec& spec) {
    check_length(spec.length);
    switch (spec.kind) {
        case GeneratorKind::Fgn: check_hurst(spec.hurst); break;
        case GeneratorKind::Arfima:
            if (!(spec.d > -0.5 && spec.d < 0.5)) throw std::invalid_argument("ARFIMA d must lie in (-0.5, 0.5)");
            break;
        case GeneratorKind::GbmOhlc:
            if (!(spec.sigma >= 0.0)) throw std::invalid_argument("sigma must be non-negative");
            check_steps(spec.steps_per_day);
            break;
        case GeneratorKind::CorrelatedPair:
            check_hurst(spec.hurst);
            check_hurst(spec.hurst2);
            if (!(spec.correlation >= -1.0 && spec.correlation <= 1.0)) {
                throw std::invalid_argument("pair correlation must lie in [-1, 1]");
            }
            break;
    }
}

Generated generate(const GeneratorSpec& spec) {
    validate(spec);
    switch (spec.kind) {
        case GeneratorKind::Fgn: return gen_fgn(spec.hurst, spec.length, spec.seed);
        case GeneratorKind::Arfima: return gen_arfima(spec.d, spec.length, spec.seed);
        case GeneratorKind::GbmOhlc: return gen_gbm_ohlc(spec.sigma, spec.length, spec.steps_per_day, spec.seed);
        case GeneratorKind::CorrelatedPair:
            return gen_correlated_pair(spec.hurst, spec.hurst2, spec.correlation, spec.length, spec.seed);
    }
    throw std::logic_error("unknown generator kind");
}

}  // namespace lev
