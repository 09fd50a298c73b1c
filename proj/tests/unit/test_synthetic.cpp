#include "lev/random.hpp"
#include "lev/spectral.hpp"
#include "lev/synthetic.hpp"
#include "lev/volatility.hpp"
#include "lev/xcorr.hpp"

#include "oracles.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <chrono>
#include <cmath>
#include <random>

using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

double acf(std::span<const double> x, std::size_t k) {
    const double m = oracle::mean(x);
    double num = 0, den = 0;
    for (std::size_t t = 0; t < x.size(); ++t) {
        den += (x[t] - m) * (x[t] - m);
        if (t + k < x.size()) num += (x[t] - m) * (x[t + k] - m);
    }
    return num / den;
}

}  // namespace

TEST_CASE("fGn autocovariance formula", "[synthetic]") {
    CHECK(lev::fgn_autocovariance(0.7, 0) == 1.0);
    CHECK_THAT(lev::fgn_autocovariance(0.7, 1), WithinAbs(0.5 * (std::pow(2.0, 1.4) - 2.0), 1e-15));
    for (std::size_t k = 1; k < 10; ++k) CHECK_THAT(lev::fgn_autocovariance(0.5, k), WithinAbs(0.0, 1e-15));
}

TEST_CASE("fGn samples have the target autocovariance", "[synthetic]") {
    const std::size_t t = 1 << 14;
    for (double h : {0.3, 0.5, 0.7, 0.9}) {
        // Average sample autocovariances over replicas to tame the slow
        // convergence of long-memory sample moments.
        std::vector<double> gamma(6, 0.0);
        const int reps = 8;
        for (int r = 0; r < reps; ++r) {
            const auto x = lev::gen_fgn(h, t, 300 + r);
            for (std::size_t k = 0; k < gamma.size(); ++k) {
                double acc = 0;
                for (std::size_t i = 0; i + k < t; ++i) acc += x[i] * x[i + k];
                gamma[k] += acc / static_cast<double>(t) / reps;
            }
        }
        for (std::size_t k = 0; k < gamma.size(); ++k) {
            CHECK_THAT(gamma[k], WithinAbs(lev::fgn_autocovariance(h, k), 4.0 / std::sqrt(static_cast<double>(t))));
        }
    }
    CHECK_THAT(acf(lev::gen_fgn(0.7, t, 5), 1), WithinAbs(0.3195, 0.03));
}

TEST_CASE("generators are deterministic in the seed", "[synthetic]") {
    CHECK(lev::gen_fgn(0.6, 500, 7) == lev::gen_fgn(0.6, 500, 7));
    CHECK(lev::gen_fgn(0.6, 500, 7) != lev::gen_fgn(0.6, 500, 8));
    CHECK(lev::gen_arfima(0.2, 300, 1) == lev::gen_arfima(0.2, 300, 1));
    CHECK(lev::gen_correlated_pair(0.5, 0.8, 0.2, 256, 3) == lev::gen_correlated_pair(0.5, 0.8, 0.2, 256, 3));
    const auto a = lev::gen_gbm_ohlc(0.01, 50, 64, 9);
    const auto b = lev::gen_gbm_ohlc(0.01, 50, 64, 9);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].close == b[i].close);
        CHECK(a[i].high == b[i].high);
    }
}

TEST_CASE("ARFIMA matches a direct MA convolution", "[synthetic]") {
    const std::size_t t = 64, trunc = 10 * t;
    const double d = 0.35;
    lev::Rng rng(21);
    std::normal_distribution<double> z;
    std::vector<double> eps(t + trunc);
    for (double& e : eps) e = z(rng);
    std::vector<double> psi(trunc + 1, 1.0);
    for (std::size_t k = 1; k <= trunc; ++k) psi[k] = std::exp(std::lgamma(k + d) - std::lgamma(d) - std::lgamma(k + 1.0));
    const auto x = lev::gen_arfima(d, t, 21);
    for (std::size_t i = 0; i < t; ++i) {
        double ref = 0;
        for (std::size_t k = 0; k <= trunc; ++k) ref += psi[k] * eps[i + trunc - k];
        REQUIRE_THAT(x[i], WithinAbs(ref, 1e-9));
    }
}

TEST_CASE("ARFIMA memory", "[synthetic]") {
    const auto iid = lev::gen_arfima(0.0, 8192, 2);
    CHECK_THAT(acf(iid, 1), WithinAbs(0.0, 0.04));
    // rho(1) = d / (1 - d)
    CHECK_THAT(acf(lev::gen_arfima(-0.3, 8192, 3), 1), WithinAbs(-0.3 / 1.3, 0.04));
    const auto x = lev::gen_arfima(0.3, 8192, 4);
    CHECK_THAT(lev::local_whittle(lev::periodogram(x), lev::bandwidth(x.size())).h, WithinAbs(0.8, 0.1));
}

TEST_CASE("GBM bars", "[synthetic]") {
    SECTION("zero volatility gives flat bars") {
        for (const auto& b : lev::gen_gbm_ohlc(0.0, 20, 64, 1)) {
            CHECK(b.open == Catch::Approx(100.0));
            CHECK(b.high == b.low);
            CHECK(b.open == b.close);
        }
    }
    SECTION("calendar and continuity") {
        const auto bars = lev::gen_gbm_ohlc(0.02, 30, 64, 2);
        CHECK(lev::format_date(bars.front().date) == "2000-01-03");
        CHECK_NOTHROW(lev::validate(bars));
        for (std::size_t i = 0; i < bars.size(); ++i) {
            const std::chrono::weekday wd{std::chrono::sys_days{bars[i].date}};
            CHECK(wd != std::chrono::Saturday);
            CHECK(wd != std::chrono::Sunday);
            if (i > 0) {
                CHECK_THAT(bars[i].open, WithinRel(bars[i - 1].close, 1e-12));
                CHECK(std::chrono::sys_days{bars[i].date} > std::chrono::sys_days{bars[i - 1].date});
            }
        }
    }
    SECTION("Garman-Klass is unbiased for exact extremes") {
        const auto bars = lev::gen_gbm_ohlc(0.01, 10000, 512, 3);
        const auto v = lev::garman_klass(bars);
        CHECK_THAT(oracle::mean(v), WithinRel(1e-4, 0.05));
    }
    SECTION("grid extremes bias the estimate down, less so on finer grids") {
        lev::OhlcSimOptions opt;
        opt.extremes = lev::ExtremeSampling::Grid;
        double prev = 0.0;
        for (std::size_t steps : {64u, 256u, 1024u}) {
            const double m = oracle::mean(lev::garman_klass(lev::gen_gbm_ohlc(0.01, 4000, steps, 4, opt)));
            CHECK(m < 1e-4);
            CHECK(m > prev);
            prev = m;
        }
    }
    CHECK_THROWS_AS(lev::gen_gbm_ohlc(0.01, 10, 32, 1), std::invalid_argument);
    CHECK_THROWS_AS(lev::gen_gbm_ohlc(-0.01, 10, 64, 1), std::invalid_argument);
}

TEST_CASE("stochastic volatility bars follow their drivers", "[synthetic]") {
    const std::vector<double> log_sigma{std::log(0.01), std::log(0.02), std::log(0.005)};
    const std::vector<double> driver{1.0, -0.5, 2.0};
    const auto bars = lev::gen_stochastic_vol_ohlc(log_sigma, driver, 128, 5);
    REQUIRE(bars.size() == 3);
    CHECK_NOTHROW(lev::validate(bars));
    const auto r = lev::open_close_returns(bars);
    CHECK_THAT(r.values[0], WithinAbs(0.01, 1e-12));
    CHECK_THAT(r.values[1], WithinAbs(-0.01, 1e-12));
    CHECK_THAT(r.values[2], WithinAbs(0.01, 1e-12));
    CHECK_THROWS_AS(lev::gen_stochastic_vol_ohlc(log_sigma, std::span(driver).first(2), 128, 5),
                    std::invalid_argument);
}

TEST_CASE("correlated fGn pairs", "[synthetic]") {
    SECTION("first member equals a plain fGn draw") {
        const auto [x, y] = lev::gen_correlated_pair(0.7, 0.9, 0.3, 1024, 13);
        CHECK(x == lev::gen_fgn(0.7, 1024, 13));
    }
    SECTION("perfect correlation with equal exponents duplicates the series") {
        const auto [x, y] = lev::gen_correlated_pair(0.6, 0.6, 1.0, 512, 2);
        for (std::size_t i = 0; i < x.size(); ++i) REQUIRE_THAT(y[i], WithinAbs(x[i], 1e-12));
    }
    SECTION("unattainable correlations throw") {
        const double cap = lev::max_pair_correlation(0.5, 0.9, 1024);
        CHECK(cap > 0.5);
        CHECK(cap < 1.0);
        CHECK_THROWS_AS(lev::gen_correlated_pair(0.5, 0.9, std::min(1.0, cap + 0.01), 1024, 1), std::invalid_argument);
        CHECK_THROWS_AS(lev::gen_correlated_pair(0.5, 0.5, 1.5, 1024, 1), std::invalid_argument);
    }
    SECTION("sample correlation tracks the target") {
        double pear = 0.0, dcca = 0.0;
        const int reps = 40;
        for (int r = 0; r < reps; ++r) {
            const auto [x, y] = lev::gen_correlated_pair(0.5, 0.8, -0.5, 2048, 600 + r);
            pear += oracle::pearson(x, y) / reps;
            dcca += lev::rho_dcca(x, y, 20).coefficient / reps;
        }
        CHECK_THAT(pear, WithinAbs(-0.5, 0.05));
        CHECK(dcca > -0.65);
        CHECK(dcca < -0.35);
    }
}

TEST_CASE("generator spec validation and dispatch", "[synthetic]") {
    lev::GeneratorSpec spec;
    CHECK_NOTHROW(lev::validate(spec));
    spec.hurst = 1.0;
    CHECK_THROWS_AS(lev::validate(spec), std::invalid_argument);
    spec = {};
    spec.kind = lev::GeneratorKind::Arfima;
    spec.d = 0.5;
    CHECK_THROWS_AS(lev::validate(spec), std::invalid_argument);
    spec = {};
    spec.kind = lev::GeneratorKind::CorrelatedPair;
    spec.correlation = -1.2;
    CHECK_THROWS_AS(lev::validate(spec), std::invalid_argument);
    spec = {};
    spec.length = 4;
    CHECK_THROWS_AS(lev::validate(spec), std::invalid_argument);

    spec = {};
    spec.hurst = 0.65;
    spec.length = 300;
    spec.seed = 8;
    const auto g = lev::generate(spec);
    REQUIRE(std::holds_alternative<std::vector<double>>(g));
    CHECK(std::get<std::vector<double>>(g) == lev::gen_fgn(0.65, 300, 8));
    spec.kind = lev::GeneratorKind::GbmOhlc;
    CHECK(std::get<lev::OhlcSeries>(lev::generate(spec)).size() == 300);
}
