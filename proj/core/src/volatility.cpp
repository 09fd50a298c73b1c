#include "lev/volatility.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace lev {

namespace {
constexpr double kCloseWeight = 2.0 * std::numbers::ln2 - 1.0;
}

double garman_klass(const OhlcBar& bar) {
    const double range = std::log(bar.high / bar.low);
    const double oc = std::log(bar.close / bar.open);
    return 0.5 * range * range - kCloseWeight * oc * oc;
}

std::vector<double> garman_klass(std::span<const OhlcBar> bars) {
    std::vector<double> out;
    out.reserve(bars.size());
    for (const auto& b : bars) out.push_back(garman_klass(b));
    return out;
}

VolatilitySeries clean_variance(std::span<const double> variance, std::span<const Date> dates,
                                const CleanOptions& options) {
    if (!dates.empty() && dates.size() != variance.size()) {
        throw std::invalid_argument("clean_variance: dates and variances differ in length");
    }
    VolatilitySeries vs;
    vs.input_size = variance.size();
    vs.gk_variance.reserve(variance.size());
    vs.kept.reserve(variance.size());
    for (std::size_t i = 0; i < variance.size(); ++i) {
        const double v = variance[i];
        if (!(v > 0.0) || !std::isfinite(v)) continue;
        vs.gk_variance.push_back(v);
        vs.kept.push_back(i);
        if (!dates.empty()) vs.dates.push_back(dates[i]);
    }
    if (vs.input_size > 0) {
        const double frac =
            static_cast<double>(vs.dropped()) / static_cast<double>(vs.input_size);
        if (frac > options.max_drop_fraction) {
            const std::string msg = "dropped " + std::to_string(vs.dropped()) + " of " +
                                    std::to_string(vs.input_size) +
                                    " non-positive variance estimates";
            if (options.strict) throw std::runtime_error(msg);
            vs.warnings.push_back(msg);
        }
    }
    return vs;
}

Series align_to(const Series& per_bar, const VolatilitySeries& vs) {
    if (per_bar.size() != vs.input_size) {
        throw std::invalid_argument("align_to: series length " + std::to_string(per_bar.size()) +
                                    " does not match uncleaned length " +
                                    std::to_string(vs.input_size));
    }
    Series out{per_bar.kind, {}};
    out.values.reserve(vs.kept.size());
    for (std::size_t i : vs.kept) out.values.push_back(per_bar.values[i]);
    return out;
}

Series log_volatility(const VolatilitySeries& vs) {
    Series out{SeriesKind::LogVolatility, {}};
    out.values.reserve(vs.size());
    for (double v : vs.gk_variance) {
        if (!(v > 0.0)) throw std::logic_error("log_volatility: non-positive variance after cleaning");
        out.values.push_back(0.5 * std::log(v));
    }
    return out;
}

Series standardize_returns(const Series& returns, const VolatilitySeries& vs) {
    if (returns.size() != vs.size()) {
        throw std::invalid_argument("standardize_returns: " + std::to_string(returns.size()) +
                                    " returns vs " + std::to_string(vs.size()) + " variances");
    }
    Series out{SeriesKind::StandardizedReturns, {}};
    out.values.reserve(vs.size());
    for (std::size_t t = 0; t < vs.size(); ++t) {
        out.values.push_back(returns.values[t] / std::sqrt(vs.gk_variance[t]));
    }
    return out;
}

}  // namespace lev
