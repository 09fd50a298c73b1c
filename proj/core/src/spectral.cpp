#include "lev/spectral.hpp"

#include "fft.hpp"

#include <boost/math/tools/minima.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace lev {

namespace {

void check_bandwidth(const Periodogram& p, std::size_t m, const char* who) {
    if (m < 4 || m > p.length / 2 || m > p.size()) {
        throw std::invalid_argument(std::string(who) + ": bandwidth " + std::to_string(m) +
                                    " outside [4, T/2] for T=" + std::to_string(p.length));
    }
}

}  // namespace

std::string_view to_string(HurstMethod method) {
    switch (method) {
        case HurstMethod::LocalWhittle: return "local-whittle";
        case HurstMethod::Gph: return "gph";
        case HurstMethod::Average: return "average";
    }
    return "local-whittle";
}

Periodogram periodogram(std::span<const double> x) {
    const std::size_t n = x.size();
    if (n < 8) throw std::invalid_argument("periodogram requires at least 8 observations");

    long double sum = 0.0L;
    for (double v : x) sum += v;
    const double mu = static_cast<double>(sum / static_cast<long double>(n));
    std::vector<double> centred(x.begin(), x.end());
    for (double& v : centred) v -= mu;

    detail::RealFft fft(n);
    std::vector<std::complex<double>> spec;
    fft.forward(centred, spec);

    Periodogram p;
    p.length = n;
    const std::size_t half = n / 2;
    p.frequencies.resize(half);
    p.ordinates.resize(half);
    const double scale = 1.0 / (2.0 * std::numbers::pi * static_cast<double>(n));
    for (std::size_t j = 1; j <= half; ++j) {
        p.frequencies[j - 1] = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(n);
        p.ordinates[j - 1] = std::norm(spec[j]) * scale;
    }
    return p;
}

std::size_t bandwidth(std::size_t length) {
    if (length < 8) throw std::invalid_argument("bandwidth requires T >= 8");
    const double raw = std::pow(static_cast<double>(length), 0.6);
    const double nearest = std::round(raw);
    const double snapped = std::abs(raw - nearest) < 1e-9 * nearest ? nearest : std::floor(raw);
    return std::min(static_cast<std::size_t>(snapped), length / 2);
}

double whittle_objective(const Periodogram& p, std::size_t m, double h) {
    check_bandwidth(p, m, "whittle_objective");
    const double e = 2.0 * h - 1.0;
    // log-sum-exp over (2H-1) log lambda_j + log I_j for numerical range
    double peak = -std::numeric_limits<double>::infinity();
    double mean_log_lambda = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
        const double ll = std::log(p.frequencies[j]);
        mean_log_lambda += ll;
        if (p.ordinates[j] > 0.0) peak = std::max(peak, e * ll + std::log(p.ordinates[j]));
    }
    mean_log_lambda /= static_cast<double>(m);
    if (!std::isfinite(peak)) throw std::domain_error("local Whittle: all ordinates are zero");
    double acc = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
        if (p.ordinates[j] > 0.0) {
            acc += std::exp(e * std::log(p.frequencies[j]) + std::log(p.ordinates[j]) - peak);
        }
    }
    return peak + std::log(acc / static_cast<double>(m)) - e * mean_log_lambda;
}

HurstEstimate local_whittle(const Periodogram& p, std::size_t m) {
    check_bandwidth(p, m, "local_whittle");
    // R(H) is a log-sum-exp of affine functions of H minus a linear term, hence
    // convex, so Brent's method on the whole bracket finds the global minimum.
    auto objective = [&](double h) { return whittle_objective(p, m, h); };
    constexpr int bits = 20;  // relative tolerance 2^-19, below 1e-5 on the bracket
    std::uintmax_t max_iter = 200;
    const auto [h, value] =
        boost::math::tools::brent_find_minima(objective, kWhittleLower, kWhittleUpper, bits, max_iter);
    (void)value;

    HurstEstimate est;
    est.h = h;
    est.standard_error = 1.0 / (2.0 * std::sqrt(static_cast<double>(m)));
    est.method = HurstMethod::LocalWhittle;
    est.bandwidth = m;
    est.series_length = p.length;
    est.at_boundary = (h - kWhittleLower) < 1e-4 || (kWhittleUpper - h) < 1e-4;
    return est;
}

HurstEstimate gph(const Periodogram& p, std::size_t m) {
    check_bandwidth(p, m, "gph");
    std::vector<double> xs;
    std::vector<double> ys;
    xs.reserve(m);
    ys.reserve(m);
    std::size_t excluded = 0;
    for (std::size_t j = 0; j < m; ++j) {
        if (!(p.ordinates[j] > 0.0)) {
            ++excluded;
            continue;
        }
        const double s = std::sin(0.5 * p.frequencies[j]);
        xs.push_back(std::log(4.0 * s * s));
        ys.push_back(std::log(p.ordinates[j]));
    }
    const std::size_t n = xs.size();
    if (n < 3) throw std::domain_error("gph: fewer than 3 positive ordinates in the bandwidth");

    double xbar = 0.0, ybar = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        xbar += xs[i];
        ybar += ys[i];
    }
    xbar /= static_cast<double>(n);
    ybar /= static_cast<double>(n);
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (xs[i] - xbar) * (xs[i] - xbar);
        sxy += (xs[i] - xbar) * (ys[i] - ybar);
    }
    const double slope = sxy / sxx;
    const double intercept = ybar - slope * xbar;
    double ssr = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = ys[i] - intercept - slope * xs[i];
        ssr += r * r;
    }

    HurstEstimate est;
    est.h = 0.5 - slope;
    est.standard_error = std::sqrt(ssr / static_cast<double>(n - 2) / sxx);
    est.method = HurstMethod::Gph;
    est.bandwidth = m;
    est.series_length = p.length;
    est.excluded = excluded;
    return est;
}

HurstEstimate average_hurst(const HurstEstimate& a, const HurstEstimate& b) {
    if (a.method == HurstMethod::Average || b.method == HurstMethod::Average || a.method == b.method) {
        throw std::invalid_argument("average_hurst: expects one local Whittle and one GPH estimate");
    }
    if (a.bandwidth != b.bandwidth || a.series_length != b.series_length) {
        throw std::invalid_argument("average_hurst: estimates come from different series or bandwidths");
    }
    HurstEstimate avg;
    avg.h = 0.5 * (a.h + b.h);
    avg.standard_error = 0.0;
    avg.method = HurstMethod::Average;
    avg.bandwidth = a.bandwidth;
    avg.series_length = a.series_length;
    avg.at_boundary = a.at_boundary || b.at_boundary;
    return avg;
}

}  // namespace lev
