#include "lev/rescaled_cov.hpp"
#include "lev/synthetic.hpp"

#include "oracles.hpp"
#include "sample.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>

using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

double profile_cov(std::span<const double> x, std::span<const double> y) {
    const auto px = oracle::profile(x), py = oracle::profile(y);
    const double mx = oracle::mean(px), my = oracle::mean(py);
    double acc = 0;
    for (std::size_t t = 0; t < px.size(); ++t) acc += (px[t] - mx) * (py[t] - my);
    return acc / static_cast<double>(px.size());
}

}  // namespace

TEST_CASE("rescaled covariance statistic", "[rct]") {
    const auto [x, y] = lev::gen_correlated_pair(0.5, 0.8, 0.4, 1000, 4);
    const double t = 1000.0;
    SECTION("exponents of one half cancel the lag prefactor") {
        const double ref = profile_cov(x, y) / (t * oracle::hac(x, y, 7));
        CHECK_THAT(lev::rescaled_covariance_stat(x, y, 7, 0.5, 0.5), WithinRel(ref, 1e-9));
    }
    SECTION("general exponents") {
        const double ref = std::pow(7.0, 0.5 + 0.8 - 1.0) * profile_cov(x, y) / (t * oracle::hac(x, y, 7));
        CHECK_THAT(lev::rescaled_covariance_stat(x, y, 7, 0.5, 0.8), WithinRel(ref, 1e-9));
    }
    CHECK_THROWS_AS(lev::rescaled_covariance_stat(x, y, 0, 0.5, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(lev::rescaled_covariance_stat(x, std::span(y).first(999), 3, 0.5, 0.5), std::invalid_argument);
}

TEST_CASE("rescaled covariance statistic symmetries", "[rct][property]") {
    for (std::uint64_t s = 0; s < 10; ++s) {
        const auto [x, y] = lev::gen_correlated_pair(0.6, 0.9, -0.2, 800, 50 + s);
        const double base = lev::rescaled_covariance_stat(x, y, 5, 0.6, 0.9);
        CHECK_THAT(lev::rescaled_covariance_stat(y, x, 5, 0.9, 0.6), WithinRel(base, 1e-10));
        auto xs = x, ys = y;
        for (double& v : xs) v *= 40.0;
        for (double& v : ys) v *= 0.002;
        CHECK_THAT(lev::rescaled_covariance_stat(xs, ys, 5, 0.6, 0.9), WithinRel(base, 1e-9));
    }
}

TEST_CASE("moving-block indices", "[rct]") {
    lev::Rng rng(3);
    const auto idx = lev::moving_block_indices(103, 10, rng);
    REQUIRE(idx.size() == 103);
    for (std::size_t b = 0; b < idx.size(); b += 10) {
        for (std::size_t j = 1; j < 10 && b + j < idx.size(); ++j) REQUIRE(idx[b + j] == idx[b] + j);
    }
    for (auto i : idx) REQUIRE(i < 103);
    CHECK_THROWS_AS(lev::moving_block_indices(5, 6, rng), std::invalid_argument);
}

TEST_CASE("bootstrap configuration", "[rct]") {
    lev::RctConfig cfg;
    CHECK(lev::effective_block_length(cfg, 2048) == 45);
    CHECK_NOTHROW(lev::validate(cfg, 2048));
    cfg.block_length = 1;
    CHECK_THROWS_AS(lev::validate(cfg, 2048), std::invalid_argument);
    cfg.block_length = 513;
    CHECK_THROWS_AS(lev::validate(cfg, 2048), std::invalid_argument);
    cfg.block_length = 512;
    CHECK_NOTHROW(lev::validate(cfg, 2048));
    cfg.replicas = 99;
    CHECK_THROWS_AS(lev::validate(cfg, 2048), std::invalid_argument);
}

TEST_CASE("bootstrap p-value", "[rct]") {
    const auto x = lev::gen_fgn(0.7, 1024, 1);
    const auto y = lev::gen_fgn(0.7, 1024, 2);
    lev::RctConfig cfg;
    cfg.lag = 5;
    cfg.replicas = 200;
    cfg.seed = 11;

    SECTION("a series against itself") {
        // With x = y the statistic is the rescaled variance statistic. The
        // independent-resampling null centres the HAC cross-covariance in the
        // denominator near zero, so null draws are of order sqrt(T) and the
        // self pair is not extreme.
        CHECK_THAT(lev::rescaled_covariance_stat(x, x, 5, 0.5, 0.5),
                   WithinRel(lev::rescaled_variance_test(x, 5).statistic, 1e-12));
        const auto b = lev::rct_bootstrap(x, x, cfg);
        CHECK(b.test.kind == lev::TestKind::RescaledCovariance);
        CHECK(b.test.lag == 5);
        CHECK(b.test.statistic > 0.0);
        std::vector<double> mag;
        for (double v : b.null_sample) mag.push_back(std::abs(v));
        CHECK(oracle::quantile(mag, 0.5) > b.test.statistic);
        CHECK(b.test.p_value > 0.5);
    }
    SECTION("deterministic given the seed") {
        const auto a = lev::rct_bootstrap(x, y, cfg, 0.7, 0.7);
        const auto b = lev::rct_bootstrap(x, y, cfg, 0.7, 0.7);
        CHECK(a.test == b.test);
        CHECK(a.null_sample == b.null_sample);
        REQUIRE(a.null_sample.size() == 200);
        std::size_t exceed = 0;
        for (double v : a.null_sample) exceed += std::abs(v) >= std::abs(a.test.statistic);
        CHECK(a.test.p_value == static_cast<double>(exceed + 1) / 201.0);
        cfg.seed = 12;
        CHECK(lev::rct_bootstrap(x, y, cfg, 0.7, 0.7).null_sample != a.null_sample);
    }
}

TEST_CASE("Hurst plug-in rule", "[rct]") {
    const auto noise = sample::normal(4096, 17);
    const auto h0 = lev::hurst_for_rct(noise, lev::optimal_lag(noise));
    CHECK(h0.h == 0.5);
    CHECK_FALSE(h0.long_memory);
    CHECK_FALSE(h0.local_whittle.has_value());

    const auto fgn = lev::gen_fgn(0.8, 4096, 17);
    const auto h1 = lev::hurst_for_rct(fgn, 3);
    REQUIRE(h1.long_memory);
    REQUIRE(h1.local_whittle.has_value());
    REQUIRE(h1.gph.has_value());
    CHECK_THAT(h1.h, WithinAbs(0.8, 0.08));
    CHECK(h1.h == 0.5 * (h1.local_whittle->h + h1.gph->h));
}
