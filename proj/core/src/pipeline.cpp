#include "lev/pipeline.hpp"

#include "lev/random.hpp"
#include "lev/rescaled_cov.hpp"

#include <string>
#include <utility>

namespace lev {

namespace {

// Runs one stage body and rewraps any failure with the instrument and stage.
template <class F>
void stage(const std::string& instrument, const char* name, F&& body) {
    try {
        body();
    } catch (const PipelineError&) {
        throw;
    } catch (const std::exception& e) {
        throw PipelineError(instrument, name, e.what());
    }
}

LrdPanel memory_panel(std::span<const double> x) {
    LrdPanel p;
    p.lag = optimal_lag(x);
    p.modified_rs = modified_rs_test(x, p.lag);
    p.rescaled_variance = rescaled_variance_test(x, p.lag);
    return p;
}

}  // namespace

void validate(const PipelineConfig& cfg) {
    if (cfg.window < 4) throw std::invalid_argument("DCCA window s must be at least 4");
    if (cfg.lambda < 3) throw std::invalid_argument("DMCA window lambda must be at least 3");
    if (cfg.surrogates < 100) throw std::invalid_argument("at least 100 surrogates are required");
    if (cfg.replicas < 100) throw std::invalid_argument("at least 100 bootstrap replicas are required");
    if (cfg.ljung_box_lags < 1) throw std::invalid_argument("Ljung-Box lag must be positive");
    if (cfg.range.from && cfg.range.to && !(*cfg.range.from < *cfg.range.to)) {
        throw std::invalid_argument("start date must precede end date");
    }
}

ReportSettings settings_of(const PipelineConfig& cfg) {
    ReportSettings s;
    if (cfg.range.from) s.from = format_date(*cfg.range.from);
    if (cfg.range.to) s.to = format_date(*cfg.range.to);
    s.window = cfg.window;
    s.lambda = cfg.lambda;
    s.surrogates = cfg.surrogates;
    s.block_length = cfg.block_length;
    s.replicas = cfg.replicas;
    s.ljung_box_lags = cfg.ljung_box_lags;
    s.seed = cfg.seed;
    return s;
}

PreparedInstrument prepare_instrument(std::string name, OhlcSeries bars, bool strict) {
    PreparedInstrument p;
    p.name = std::move(name);
    stage(p.name, "volatility", [&] {
        validate(bars);
        const Series raw = open_close_returns(bars);
        std::vector<Date> dates;
        dates.reserve(bars.size());
        for (const auto& b : bars) dates.push_back(b.date);
        CleanOptions opts;
        opts.strict = strict;
        p.volatility = clean_variance(garman_klass(bars), dates, opts);
        if (p.volatility.size() == 0) throw std::domain_error("no bar has a positive Garman-Klass variance");
        p.returns = align_to(raw, p.volatility);
        p.standardized = standardize_returns(p.returns, p.volatility);
        p.log_volatility = log_volatility(p.volatility);
    });
    p.bars = std::move(bars);
    return p;
}

void run_descriptive(const PreparedInstrument& in, const PipelineConfig& cfg, InstrumentReport& out) {
    stage(in.name, "describe", [&] {
        out.raw_returns = describe(in.returns.view(), cfg.ljung_box_lags);
        out.standardized_returns = describe(in.standardized.view(), cfg.ljung_box_lags);
        out.log_volatility = describe(in.log_volatility.view(), cfg.ljung_box_lags);
    });
}

void run_memory_tests(const PreparedInstrument& in, const PipelineConfig&, InstrumentReport& out) {
    stage(in.name, "lrd-test", [&] {
        out.lrd_raw = memory_panel(in.returns.view());
        out.lrd_standardized = memory_panel(in.standardized.view());
        out.lrd_log_volatility = memory_panel(in.log_volatility.view());
    });
}

void run_hurst(const PreparedInstrument& in, const PipelineConfig&, InstrumentReport& out) {
    stage(in.name, "hurst", [&] {
        const auto p = periodogram(in.log_volatility.view());
        const std::size_t m = bandwidth(in.log_volatility.size());
        out.local_whittle = local_whittle(p, m);
        out.gph = gph(p, m);
        out.average = average_hurst(out.local_whittle, out.gph);
    });
}

void run_correlation(const PreparedInstrument& in, const PipelineConfig& cfg, InstrumentReport& out) {
    stage(in.name, "xcorr", [&] {
        const auto x = in.standardized.view();
        const auto y = in.log_volatility.view();
        out.dcca = xcorr_with_significance(x, y, XCorrMethod::Dcca, cfg.window, cfg.surrogates,
                                           derive_seed(cfg.seed, kDccaStream), cfg.alignment);
        out.dmca = xcorr_with_significance(x, y, XCorrMethod::Dmca, cfg.lambda, cfg.surrogates,
                                           derive_seed(cfg.seed, kDmcaStream), cfg.alignment);
    });
}

void run_rescaled_covariance(const PreparedInstrument& in, const PipelineConfig& cfg, InstrumentReport& out) {
    stage(in.name, "rct", [&] {
        const auto x = in.standardized.view();
        const auto y = in.log_volatility.view();
        const std::size_t q = std::max<std::size_t>(1, optimal_lag(y));
        const auto hx = hurst_for_rct(x, std::max<std::size_t>(1, optimal_lag(x)));
        const auto hy = hurst_for_rct(y, q);
        RctConfig rc;
        rc.lag = q;
        rc.block_length = cfg.block_length;
        rc.replicas = cfg.replicas;
        rc.seed = derive_seed(cfg.seed, kRctStream);
        out.rct_hurst_returns = hx.h;
        out.rct_hurst_volatility = hy.h;
        out.rct_block_length = effective_block_length(rc, x.size());
        out.rct = rct_pvalue(x, y, rc, hx.h, hy.h);
    });
}

InstrumentReport analyse_instrument(const PreparedInstrument& in, const PipelineConfig& cfg, unsigned tables) {
    InstrumentReport r;
    r.name = in.name;
    r.bars = in.volatility.input_size;
    r.observations = in.volatility.size();
    r.dropped = in.volatility.dropped();
    if (!in.volatility.dates.empty()) {
        r.first_date = format_date(in.volatility.dates.front());
        r.last_date = format_date(in.volatility.dates.back());
    }
    r.warnings = in.volatility.warnings;

    if (tables & kDescriptive) run_descriptive(in, cfg, r);
    if (tables & kMemoryTests) run_memory_tests(in, cfg, r);
    if (tables & kHurst) run_hurst(in, cfg, r);
    if (tables & kCorrelation) run_correlation(in, cfg, r);
    if (tables & kRescaledCovariance) run_rescaled_covariance(in, cfg, r);
    return r;
}

ReportBundle run_pipeline(const PipelineConfig& cfg, unsigned tables) {
    stage("*", "config", [&] {
        validate(cfg);
        if (cfg.instruments.empty()) throw std::invalid_argument("no instruments configured");
    });

    ReportBundle bundle;
    bundle.settings = settings_of(cfg);
    bundle.tables = tables & kAllTables;
    bundle.instruments.reserve(cfg.instruments.size());

    // Instruments run one after another; the heavy resampling loops inside
    // each stage are already parallel.
    for (const auto& inst : cfg.instruments) {
        IngestResult ingested;
        stage(inst.name, "ingest", [&] {
            IngestOptions opts;
            opts.strict = cfg.strict;
            opts.columns = cfg.columns;
            ingested = ingest_csv(inst.path, cfg.range, opts);
        });
        const auto prepared = prepare_instrument(inst.name, std::move(ingested.bars), cfg.strict);
        auto report = analyse_instrument(prepared, cfg, bundle.tables);
        std::vector<std::string> notes;
        for (const auto& issue : ingested.rejected) {
            notes.push_back(inst.path + ":" + std::to_string(issue.line) + ": rejected: " + issue.reason);
        }
        if (!ingested.missing.empty()) {
            notes.push_back(inst.path + ": dropped " + std::to_string(ingested.missing.size()) +
                            " row(s) with missing prices");
        }
        report.warnings.insert(report.warnings.begin(), notes.begin(), notes.end());
        bundle.instruments.push_back(std::move(report));
    }
    return bundle;
}

}  // namespace lev
