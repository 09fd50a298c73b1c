#include "lev/series.hpp"

#include <boost/math/distributions/chi_squared.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace lev {

namespace {

int parse_int(std::string_view text) {
    int value = 0;
    const auto* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc{} || ptr != end) {
        throw std::invalid_argument("not an integer: '" + std::string(text) + "'");
    }
    return value;
}

double chi2_survival(double statistic, double dof) {
    if (!(statistic > 0.0)) return 1.0;
    boost::math::chi_squared dist(dof);
    return boost::math::cdf(boost::math::complement(dist, statistic));
}

}  // namespace

Date parse_date(std::string_view text) {
    if (text.size() != 10 || text[4] != '-' || text[7] != '-') {
        throw std::invalid_argument("expected ISO date YYYY-MM-DD, got '" + std::string(text) + "'");
    }
    const Date date{std::chrono::year{parse_int(text.substr(0, 4))},
                    std::chrono::month{static_cast<unsigned>(parse_int(text.substr(5, 2)))},
                    std::chrono::day{static_cast<unsigned>(parse_int(text.substr(8, 2)))}};
    if (!date.ok()) {
        throw std::invalid_argument("invalid calendar date '" + std::string(text) + "'");
    }
    return date;
}

std::string format_date(const Date& date) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(date.year()),
                  static_cast<unsigned>(date.month()), static_cast<unsigned>(date.day()));
    return buf;
}

std::string bar_violation(const OhlcBar& bar) {
    if (!(bar.open > 0.0 && bar.high > 0.0 && bar.low > 0.0 && bar.close > 0.0)) {
        return "non-positive price";
    }
    if (bar.low > std::min(bar.open, bar.close)) return "low above open/close";
    if (bar.high < std::max(bar.open, bar.close)) return "high below open/close";
    return {};
}

void validate(std::span<const OhlcBar> bars) {
    for (std::size_t i = 0; i < bars.size(); ++i) {
        if (auto why = bar_violation(bars[i]); !why.empty()) {
            throw std::invalid_argument("bar " + std::to_string(i) + " (" +
                                        format_date(bars[i].date) + "): " + why);
        }
        if (i > 0 && !(bars[i - 1].date < bars[i].date)) {
            throw std::invalid_argument("bar " + std::to_string(i) +
                                        ": dates not strictly increasing");
        }
    }
}

std::string_view to_string(SeriesKind kind) {
    switch (kind) {
        case SeriesKind::RawReturns: return "raw-returns";
        case SeriesKind::StandardizedReturns: return "standardized-returns";
        case SeriesKind::LogVolatility: return "log-volatility";
        case SeriesKind::Profile: return "profile";
        case SeriesKind::Generic: return "generic";
    }
    return "generic";
}

Series open_close_returns(std::span<const OhlcBar> bars) {
    Series out{SeriesKind::RawReturns, {}};
    out.values.reserve(bars.size());
    for (std::size_t i = 0; i < bars.size(); ++i) {
        const auto& b = bars[i];
        if (!(b.open > 0.0) || !(b.close > 0.0)) {
            throw std::invalid_argument("non-positive price at bar " + std::to_string(i));
        }
        out.values.push_back(std::log(b.close) - std::log(b.open));
    }
    return out;
}

double mean(std::span<const double> x) {
    if (x.empty()) throw std::invalid_argument("mean of an empty series");
    long double sum = 0.0L;
    for (double v : x) sum += v;
    return static_cast<double>(sum / static_cast<long double>(x.size()));
}

std::vector<double> profile(std::span<const double> x) {
    if (x.size() < 2) throw std::invalid_argument("profile requires at least 2 observations");
    const double mu = mean(x);
    std::vector<double> out(x.size());
    long double acc = 0.0L;
    for (std::size_t t = 0; t < x.size(); ++t) {
        acc += static_cast<long double>(x[t]) - mu;
        out[t] = static_cast<double>(acc);
    }
    return out;
}

Series profile(const Series& x) { return {SeriesKind::Profile, profile(x.view())}; }

double autocorrelation(std::span<const double> x, std::size_t k) {
    if (k >= x.size()) throw std::invalid_argument("autocorrelation lag exceeds series length");
    const double mu = mean(x);
    double num = 0.0;
    double den = 0.0;
    for (std::size_t t = 0; t < x.size(); ++t) {
        const double d = x[t] - mu;
        den += d * d;
        if (t >= k) num += d * (x[t - k] - mu);
    }
    const auto [lo, hi] = std::minmax_element(x.begin(), x.end());
    if (*lo == *hi || !(den > 0.0)) throw std::domain_error("autocorrelation of a constant series");
    return num / den;
}

StatsReport describe(std::span<const double> x, std::size_t lags) {
    const std::size_t n = x.size();
    if (lags < 1 || n <= lags) {
        throw std::invalid_argument("describe requires length > lags >= 1");
    }
    const double mu = mean(x);
    double m2 = 0.0, m3 = 0.0, m4 = 0.0;
    for (double v : x) {
        const double d = v - mu;
        const double d2 = d * d;
        m2 += d2;
        m3 += d2 * d;
        m4 += d2 * d2;
    }
    const auto nd = static_cast<double>(n);
    m2 /= nd;
    m3 /= nd;
    m4 /= nd;
    const auto [lo, hi] = std::minmax_element(x.begin(), x.end());
    if (*lo == *hi || !(m2 > 0.0)) throw std::domain_error("zero variance: skewness and kurtosis undefined");

    StatsReport r;
    r.length = n;
    r.lags = lags;
    r.mean = mu;
    r.sd = std::sqrt(m2 * nd / (nd - 1.0));
    r.skewness = m3 / std::pow(m2, 1.5);
    r.excess_kurtosis = m4 / (m2 * m2) - 3.0;
    r.jarque_bera =
        nd / 6.0 * (r.skewness * r.skewness + 0.25 * r.excess_kurtosis * r.excess_kurtosis);
    r.jarque_bera_p = chi2_survival(r.jarque_bera, 2.0);

    double q = 0.0;
    for (std::size_t k = 1; k <= lags; ++k) {
        const double rho = autocorrelation(x, k);
        q += rho * rho / (nd - static_cast<double>(k));
    }
    r.ljung_box = nd * (nd + 2.0) * q;
    r.ljung_box_p = chi2_survival(r.ljung_box, static_cast<double>(lags));
    return r;
}

}  // namespace lev
