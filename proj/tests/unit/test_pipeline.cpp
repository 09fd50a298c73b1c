#include "lev/pipeline.hpp"
#include "lev/random.hpp"
#include "lev/rescaled_cov.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <chrono>
#include <sstream>

namespace {

const std::string kFixtures = LEV_FIXTURE_DIR;

lev::PipelineConfig small_config() {
    lev::PipelineConfig cfg;
    cfg.instruments = {{"null", kFixtures + "/null.csv"}, {"leverage", kFixtures + "/leverage.csv"}};
    cfg.surrogates = 200;
    cfg.replicas = 200;
    cfg.seed = 7;
    return cfg;
}

std::size_t count_lines_starting(const std::string& text, const std::string& prefix) {
    std::istringstream in(text);
    std::size_t n = 0;
    for (std::string line; std::getline(in, line);) n += line.starts_with(prefix);
    return n;
}

}  // namespace

TEST_CASE("configuration validation", "[pipeline]") {
    lev::PipelineConfig cfg;
    CHECK_NOTHROW(lev::validate(cfg));
    auto bad = cfg;
    bad.window = 3;
    CHECK_THROWS_AS(lev::validate(bad), std::invalid_argument);
    bad = cfg;
    bad.lambda = 2;
    CHECK_THROWS_AS(lev::validate(bad), std::invalid_argument);
    bad = cfg;
    bad.surrogates = 99;
    CHECK_THROWS_AS(lev::validate(bad), std::invalid_argument);
    bad = cfg;
    bad.replicas = 50;
    CHECK_THROWS_AS(lev::validate(bad), std::invalid_argument);
    bad = cfg;
    bad.range.from = lev::parse_date("2005-01-01");
    bad.range.to = lev::parse_date("2004-01-01");
    CHECK_THROWS_AS(lev::validate(bad), std::invalid_argument);
}

TEST_CASE("an empty date range fails before any computation", "[pipeline]") {
    auto cfg = small_config();
    cfg.instruments[0].path = "/nonexistent.csv";  // never opened
    cfg.range.from = lev::parse_date("2003-01-01");
    cfg.range.to = lev::parse_date("2003-01-01");
    try {
        (void)lev::run_pipeline(cfg);
        FAIL("expected a configuration error");
    } catch (const lev::PipelineError& e) {
        CHECK(e.stage() == "config");
    }
}

TEST_CASE("stage errors carry the instrument and stage", "[pipeline]") {
    auto cfg = small_config();
    cfg.instruments[1].path = kFixtures + "/missing.csv";
    try {
        (void)lev::run_pipeline(cfg);
        FAIL("expected an ingest error");
    } catch (const lev::PipelineError& e) {
        CHECK(e.instrument() == "leverage");
        CHECK(e.stage() == "ingest");
        CHECK(std::string(e.what()).starts_with("[leverage:ingest]"));
    }

    lev::OhlcSeries flat(40, {lev::parse_date("2000-01-03"), 1.0, 1.0, 1.0, 1.0});
    for (std::size_t i = 1; i < flat.size(); ++i) flat[i].date = lev::Date{std::chrono::sys_days{flat[i - 1].date} + std::chrono::days{1}};
    try {
        (void)lev::prepare_instrument("flat", flat);
        FAIL("expected a volatility error");
    } catch (const lev::PipelineError& e) {
        CHECK(e.stage() == "volatility");
    }

    CHECK_THROWS_AS(lev::run_pipeline(lev::PipelineConfig{}), lev::PipelineError);
}

TEST_CASE("end-to-end determinism and emission", "[pipeline]") {
    const auto cfg = small_config();
    const auto a = lev::run_pipeline(cfg);
    const auto b = lev::run_pipeline(cfg);
    REQUIRE(a == b);
    REQUIRE(a.instruments.size() == 2);
    CHECK(a.instruments[0].name == "null");
    CHECK(a.instruments[1].name == "leverage");
    CHECK(a.instruments[0].observations == 1500);

    for (auto fmt : {lev::OutputFormat::Table, lev::OutputFormat::Delimited, lev::OutputFormat::Structured}) {
        CHECK(lev::emit(a, fmt) == lev::emit(b, fmt));
    }

    SECTION("structured output round-trips") {
        const auto parsed = lev::parse_structured(lev::emit(a, lev::OutputFormat::Structured));
        CHECK(parsed == a);
        CHECK(lev::emit(parsed, lev::OutputFormat::Structured) == lev::emit(a, lev::OutputFormat::Structured));
        CHECK_THROWS(lev::parse_structured("{not json"));
    }

    SECTION("table output has every descriptive row for each panel") {
        const auto text = lev::emit(a, lev::OutputFormat::Table);
        for (const char* row : {"  Mean ", "  SD ", "  Skewness ", "  Excess kurtosis ", "  Jarque-Bera ", "  Q(30) "}) {
            CHECK(count_lines_starting(text, row) == 3);  // raw, standardized, log volatility
        }
        for (const char* title : {"Table 1.", "Table 2.", "Table 3.", "Table 4.", "Table 5."}) {
            CHECK(text.find(title) != std::string::npos);
        }
    }

    SECTION("delimited output has one value per instrument per row") {
        const auto text = lev::emit(a, lev::OutputFormat::Delimited);
        CHECK(text.starts_with("table,panel,statistic,instrument,value\n"));
        CHECK(count_lines_starting(text, "descriptive,Raw returns,Mean,") == 2);
        CHECK(count_lines_starting(text, "correlation,") % 2 == 0);
    }
}

TEST_CASE("table selection", "[pipeline]") {
    const auto cfg = small_config();
    const auto hurst_only = lev::run_pipeline(cfg, lev::kHurst);
    CHECK(hurst_only.tables == lev::kHurst);
    const auto text = lev::emit(hurst_only, lev::OutputFormat::Table);
    CHECK(text.find("Table 3.") != std::string::npos);
    CHECK(text.find("Table 1.") == std::string::npos);
    CHECK(text.find("Table 4.") == std::string::npos);
    CHECK(hurst_only.instruments[0].local_whittle == lev::run_pipeline(cfg).instruments[0].local_whittle);
}

TEST_CASE("stages compose to the one-shot run", "[pipeline][property]") {
    const auto cfg = small_config();
    const auto full = lev::run_pipeline(cfg);
    for (std::size_t i = 0; i < cfg.instruments.size(); ++i) {
        const auto ingested = lev::ingest_csv(cfg.instruments[i].path, cfg.range);
        const auto prepared = lev::prepare_instrument(cfg.instruments[i].name, ingested.bars);
        lev::InstrumentReport piecewise;
        piecewise.name = cfg.instruments[i].name;
        lev::run_descriptive(prepared, cfg, piecewise);
        lev::run_memory_tests(prepared, cfg, piecewise);
        lev::run_hurst(prepared, cfg, piecewise);
        lev::run_correlation(prepared, cfg, piecewise);
        lev::run_rescaled_covariance(prepared, cfg, piecewise);
        const auto& ref = full.instruments[i];
        CHECK(piecewise.raw_returns == ref.raw_returns);
        CHECK(piecewise.lrd_log_volatility == ref.lrd_log_volatility);
        CHECK(piecewise.average == ref.average);
        CHECK(piecewise.dcca == ref.dcca);
        CHECK(piecewise.dmca == ref.dmca);
        CHECK(piecewise.rct == ref.rct);
        CHECK(lev::analyse_instrument(prepared, cfg).dcca == ref.dcca);
    }
}

TEST_CASE("stage outputs follow their definitions", "[pipeline]") {
    const auto cfg = small_config();
    const auto prepared = lev::prepare_instrument("leverage", lev::ingest_csv(cfg.instruments[1].path).bars);
    const auto r = lev::analyse_instrument(prepared, cfg);
    const auto& lv = prepared.log_volatility.values;
    const auto& z = prepared.standardized.values;

    CHECK(r.lrd_log_volatility.lag == lev::optimal_lag(lv));
    CHECK(r.local_whittle.bandwidth == lev::bandwidth(lv.size()));
    CHECK(r.average.h == 0.5 * (r.local_whittle.h + r.gph.h));
    CHECK(r.dcca.coefficient == lev::rho_dcca(z, lv, cfg.window).coefficient);
    CHECK(r.dcca.seed == lev::derive_seed(cfg.seed, lev::kDccaStream));
    CHECK(r.dmca.seed == lev::derive_seed(cfg.seed, lev::kDmcaStream));
    CHECK(r.dcca.surrogates == cfg.surrogates);
    CHECK(r.rct.lag == std::max<std::size_t>(1, lev::optimal_lag(lv)));
    CHECK(r.rct_block_length == 38);  // floor(sqrt(1500))
    // The fixture was simulated with a return-volatility correlation of -0.4.
    CHECK(r.dcca.coefficient < -0.2);
    CHECK(*r.dcca.p_value < 0.05);
}

TEST_CASE("a null pair shows no significant correlation", "[pipeline]") {
    const auto cfg = small_config();
    const auto rep = lev::run_pipeline(cfg, lev::kCorrelation | lev::kRescaledCovariance);
    const auto& null = rep.instruments[0];
    CHECK(*null.dcca.p_value > 0.05);
    CHECK(*null.dmca.p_value > 0.05);
    CHECK(null.rct.p_value > 0.05);
}

TEST_CASE("warnings from ingestion reach the report", "[pipeline]") {
    auto cfg = small_config();
    cfg.instruments = {{"vendor", kFixtures + "/vendor.csv"}};
    cfg.columns = lev::load_column_mapping(kFixtures + "/columns.json");
    const auto rep = lev::run_pipeline(cfg, lev::kDescriptive);
    const auto& w = rep.instruments[0].warnings;
    CHECK(std::any_of(w.begin(), w.end(), [](const auto& s) { return s.find("duplicate") != std::string::npos; }));
    CHECK(std::any_of(w.begin(), w.end(), [](const auto& s) { return s.find("missing") != std::string::npos; }));
    CHECK(rep.instruments[0].bars == 599);

    cfg.strict = true;
    CHECK_THROWS_AS(lev::run_pipeline(cfg, lev::kDescriptive), lev::PipelineError);
}
