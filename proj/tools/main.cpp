// leverage: command-line front end for the return/volatility analysis pipeline.

#include "lev/pipeline.hpp"
#include "lev/random.hpp"
#include "lev/synthetic.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>

namespace {

using lev::PipelineError;

// Options shared by every analysis subcommand.
struct CommonOptions {
    std::vector<std::string> inputs;  // NAME=PATH or PATH
    std::string config_path;
    std::string columns_path;
    std::string from;
    std::string to;
    std::string format = "table";
    std::string output;
    std::optional<std::uint64_t> seed;
    bool strict = false;
};

struct AnalysisOptions {
    std::optional<std::size_t> window;
    std::optional<std::size_t> lambda;
    std::optional<std::size_t> surrogates;
    std::optional<std::size_t> blocks;
    std::optional<std::size_t> replicas;
    std::optional<std::size_t> lags;
    std::string alignment;
};

struct SimulateOptions {
    std::string kind = "fgn";
    double hurst = 0.7;
    double hurst2 = 0.5;
    double d = 0.2;
    double sigma = 0.01;
    double correlation = 0.0;
    double vol_of_vol = 0.3;
    std::size_t length = 1024;
    std::size_t steps = 512;
    std::string start = "2000-01-03";
    std::uint64_t seed = 42;
    std::string output;
};

void add_common(CLI::App* cmd, CommonOptions& c, bool with_format = true) {
    cmd->add_option("inputs", c.inputs, "OHLC CSV files, optionally as NAME=PATH");
    cmd->add_option("-i,--input", c.inputs, "OHLC CSV file as NAME=PATH (repeatable)");
    cmd->add_option("-c,--config", c.config_path, "JSON pipeline configuration")->check(CLI::ExistingFile);
    cmd->add_option("--columns", c.columns_path, "JSON vendor column mapping")->check(CLI::ExistingFile);
    cmd->add_option("--from", c.from, "first date (YYYY-MM-DD)");
    cmd->add_option("--to", c.to, "last date (YYYY-MM-DD)");
    cmd->add_option("--seed", c.seed, "master seed")->envname("LEVERAGE_SEED");
    cmd->add_flag("--strict", c.strict, "abort on the first invalid row or excessive variance drops");
    cmd->add_option("-o,--output", c.output, "write to this file instead of stdout");
    if (with_format) cmd->add_option("--format", c.format, "table | delimited | structured");
}

void add_analysis(CLI::App* cmd, AnalysisOptions& a, unsigned tables) {
    if (tables & lev::kDescriptive) cmd->add_option("--lags", a.lags, "Ljung-Box lag (default 30)");
    if (tables & lev::kCorrelation) {
        cmd->add_option("--window", a.window, "DCCA box size s (default 20)");
        cmd->add_option("--lambda", a.lambda, "DMCA moving-average length (default: --window, else 20)");
        cmd->add_option("--surrogates", a.surrogates, "Fourier surrogates per p-value (default 10000)");
        cmd->add_option("--alignment", a.alignment, "even-window moving average: left | right");
    }
    if (tables & lev::kRescaledCovariance) {
        cmd->add_option("--blocks", a.blocks, "bootstrap block length (default floor(sqrt(T)))");
        cmd->add_option("--replicas", a.replicas, "bootstrap replicas (default 1000)");
    }
}

lev::InstrumentInput parse_input(const std::string& spec) {
    const auto eq = spec.find('=');
    if (eq != std::string::npos && eq > 0) return {spec.substr(0, eq), spec.substr(eq + 1)};
    return {std::filesystem::path(spec).stem().string(), spec};
}

std::optional<lev::Date> date_or_empty(const std::string& s) {
    if (s.empty()) return std::nullopt;
    return lev::parse_date(s);
}

lev::MaAlignment parse_alignment(const std::string& s) {
    if (s == "left") return lev::MaAlignment::LeftHeavy;
    if (s == "right") return lev::MaAlignment::RightHeavy;
    throw std::invalid_argument("alignment must be 'left' or 'right'");
}

// Config file first, then command-line flags on top.
lev::PipelineConfig build_config(const CommonOptions& c, const AnalysisOptions& a) {
    lev::PipelineConfig cfg;
    if (!c.config_path.empty()) {
        std::ifstream in(c.config_path);
        const auto j = nlohmann::json::parse(in);
        const auto base = std::filesystem::path(c.config_path).parent_path();
        for (const auto& inst : j.value("instruments", nlohmann::json::array())) {
            std::filesystem::path p = inst.at("path").get<std::string>();
            if (p.is_relative()) p = base / p;
            cfg.instruments.push_back({inst.at("name").get<std::string>(), p.string()});
        }
        if (j.contains("from")) cfg.range.from = lev::parse_date(j["from"].get<std::string>());
        if (j.contains("to")) cfg.range.to = lev::parse_date(j["to"].get<std::string>());
        cfg.window = j.value("window", cfg.window);
        cfg.lambda = j.value("lambda", cfg.lambda);
        cfg.surrogates = j.value("surrogates", cfg.surrogates);
        cfg.block_length = j.value("block_length", cfg.block_length);
        cfg.replicas = j.value("replicas", cfg.replicas);
        cfg.ljung_box_lags = j.value("ljung_box_lags", cfg.ljung_box_lags);
        cfg.seed = j.value("seed", cfg.seed);
        cfg.strict = j.value("strict", cfg.strict);
        if (j.contains("alignment")) cfg.alignment = parse_alignment(j["alignment"].get<std::string>());
        if (j.contains("columns")) {
            std::filesystem::path p = j["columns"].get<std::string>();
            if (p.is_relative()) p = base / p;
            cfg.columns = lev::load_column_mapping(p.string());
        }
    }
    for (const auto& s : c.inputs) cfg.instruments.push_back(parse_input(s));
    if (auto d = date_or_empty(c.from)) cfg.range.from = d;
    if (auto d = date_or_empty(c.to)) cfg.range.to = d;
    if (!c.columns_path.empty()) cfg.columns = lev::load_column_mapping(c.columns_path);
    if (c.seed) cfg.seed = *c.seed;
    if (c.strict) cfg.strict = true;
    cfg.format = lev::parse_format(c.format);
    if (a.window) {
        cfg.window = *a.window;
        if (!a.lambda) cfg.lambda = *a.window;
    }
    if (a.lambda) cfg.lambda = *a.lambda;
    if (a.surrogates) cfg.surrogates = *a.surrogates;
    if (a.blocks) cfg.block_length = *a.blocks;
    if (a.replicas) cfg.replicas = *a.replicas;
    if (a.lags) cfg.ljung_box_lags = *a.lags;
    if (!a.alignment.empty()) cfg.alignment = parse_alignment(a.alignment);
    if (cfg.instruments.empty()) throw std::invalid_argument("no input files given");
    return cfg;
}

void write_output(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        std::cout.flush();
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << text;
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

void report_ingest_issues(const std::string& name, const lev::IngestResult& r) {
    for (const auto& issue : r.rejected) {
        std::cerr << "leverage: [" << name << ":ingest] line " << issue.line << " rejected: " << issue.reason << "\n";
    }
    for (const auto& w : r.warnings) std::cerr << "leverage: [" << name << ":ingest] warning: " << w << "\n";
}

// `ingest`: cleaned per-bar table with the derived series.
int cmd_ingest(const CommonOptions& c) {
    const auto cfg = build_config(c, {});
    if (cfg.instruments.size() != 1) throw std::invalid_argument("ingest takes exactly one input");
    const auto& inst = cfg.instruments.front();
    lev::IngestResult ingested;
    try {
        ingested = lev::ingest_csv(inst.path, cfg.range, {cfg.strict, cfg.columns});
    } catch (const std::exception& e) {
        throw PipelineError(inst.name, "ingest", e.what());
    }
    report_ingest_issues(inst.name, ingested);
    const auto bars = ingested.bars;
    const auto prepared = lev::prepare_instrument(inst.name, std::move(ingested.bars), cfg.strict);
    for (const auto& w : prepared.volatility.warnings) {
        std::cerr << "leverage: [" << inst.name << ":volatility] warning: " << w << "\n";
    }

    const auto& vs = prepared.volatility;
    std::vector<std::ptrdiff_t> slot(bars.size(), -1);
    for (std::size_t k = 0; k < vs.kept.size(); ++k) slot[vs.kept[k]] = static_cast<std::ptrdiff_t>(k);

    std::string out = "date,open,high,low,close,return,gk_variance,log_volatility,standardized_return\n";
    for (std::size_t i = 0; i < bars.size(); ++i) {
        const auto& b = bars[i];
        out += lev::format_date(b.date) + "," + fmt(b.open) + "," + fmt(b.high) + "," + fmt(b.low) + "," +
               fmt(b.close) + "," + fmt(std::log(b.close) - std::log(b.open)) + "," + fmt(lev::garman_klass(b));
        if (slot[i] >= 0) {
            const auto k = static_cast<std::size_t>(slot[i]);
            out += "," + fmt(prepared.log_volatility.values[k]) + "," + fmt(prepared.standardized.values[k]);
        } else {
            out += ",,";
        }
        out += "\n";
    }
    write_output(c.output, out);
    return 0;
}

int cmd_analysis(const CommonOptions& c, const AnalysisOptions& a, unsigned tables) {
    const auto cfg = build_config(c, a);
    const auto bundle = lev::run_pipeline(cfg, tables);
    for (const auto& r : bundle.instruments) {
        for (const auto& w : r.warnings) std::cerr << "leverage: [" << r.name << "] warning: " << w << "\n";
    }
    write_output(c.output, lev::emit(bundle, cfg.format));
    return 0;
}

int cmd_simulate(const SimulateOptions& s) {
    std::string out;
    const auto series_csv = [&](const std::vector<double>& x) {
        out = "t,value\n";
        for (std::size_t t = 0; t < x.size(); ++t) out += std::to_string(t) + "," + fmt(x[t]) + "\n";
    };
    const auto ohlc_csv = [&](const lev::OhlcSeries& bars) {
        out = "date,open,high,low,close\n";
        for (const auto& b : bars) {
            out += lev::format_date(b.date) + "," + fmt(b.open) + "," + fmt(b.high) + "," + fmt(b.low) + "," +
                   fmt(b.close) + "\n";
        }
    };
    lev::OhlcSimOptions sim;
    sim.start_date = lev::parse_date(s.start);

    if (s.kind == "fgn") {
        series_csv(lev::gen_fgn(s.hurst, s.length, s.seed));
    } else if (s.kind == "arfima") {
        series_csv(lev::gen_arfima(s.d, s.length, s.seed));
    } else if (s.kind == "pair") {
        const auto [x, y] = lev::gen_correlated_pair(s.hurst, s.hurst2, s.correlation, s.length, s.seed);
        out = "t,x,y\n";
        for (std::size_t t = 0; t < x.size(); ++t) out += std::to_string(t) + "," + fmt(x[t]) + "," + fmt(y[t]) + "\n";
    } else if (s.kind == "gbm") {
        ohlc_csv(lev::gen_gbm_ohlc(s.sigma, s.length, s.steps, s.seed, sim));
    } else if (s.kind == "sv") {
        // Return driver (white noise) paired with an fGn log-volatility driver;
        // --correlation sets their contemporaneous correlation.
        const auto [shock, vol] = lev::gen_correlated_pair(0.5, s.hurst, s.correlation, s.length, s.seed);
        std::vector<double> log_sigma(vol.size());
        for (std::size_t t = 0; t < vol.size(); ++t) log_sigma[t] = std::log(s.sigma) + s.vol_of_vol * vol[t];
        ohlc_csv(lev::gen_stochastic_vol_ohlc(log_sigma, shock, s.steps, lev::derive_seed(s.seed, 0), sim));
    } else {
        throw std::invalid_argument("unknown generator '" + s.kind + "' (fgn | arfima | pair | gbm | sv)");
    }
    write_output(s.output, out);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Leverage-effect analysis of OHLC price series: volatility, long memory, detrended "
                 "cross-correlation and rescaled covariance tests."};
    app.require_subcommand(1);

    struct Command {
        CLI::App* app;
        unsigned tables;
    };
    std::map<std::string, CommonOptions> common;
    std::map<std::string, AnalysisOptions> analysis;

    auto* ingest = app.add_subcommand("ingest", "parse, clean and print the derived per-bar series");
    add_common(ingest, common["ingest"], false);

    const std::vector<std::tuple<std::string, std::string, unsigned>> stages{
        {"describe", "descriptive statistics (Table 1)", lev::kDescriptive},
        {"lrd-test", "modified R/S and rescaled variance tests (Table 2)", lev::kMemoryTests},
        {"hurst", "local Whittle and GPH estimates for log volatility (Table 3)", lev::kHurst},
        {"xcorr", "DCCA and DMCA coefficients with surrogate p-values (Table 4)", lev::kCorrelation},
        {"rct", "rescaled covariance test (Table 5)", lev::kRescaledCovariance},
        {"pipeline", "all of the above in one run", lev::kAllTables},
    };
    std::vector<Command> commands;
    for (const auto& [name, help, tables] : stages) {
        auto* cmd = app.add_subcommand(name, help);
        add_common(cmd, common[name]);
        add_analysis(cmd, analysis[name], tables);
        commands.push_back({cmd, tables});
    }

    SimulateOptions sim;
    auto* simulate = app.add_subcommand("simulate", "write synthetic series");
    simulate->add_option("--kind", sim.kind, "fgn | arfima | pair | gbm | sv")->capture_default_str();
    simulate->add_option("--hurst", sim.hurst, "Hurst exponent (fgn, pair, sv volatility)")->capture_default_str();
    simulate->add_option("--hurst2", sim.hurst2, "second Hurst exponent (pair)")->capture_default_str();
    simulate->add_option("--d", sim.d, "fractional difference (arfima)")->capture_default_str();
    simulate->add_option("--sigma", sim.sigma, "daily volatility (gbm, sv)")->capture_default_str();
    simulate->add_option("--correlation", sim.correlation, "pair / return-volatility correlation")
        ->capture_default_str();
    simulate->add_option("--vol-of-vol", sim.vol_of_vol, "scale of log-volatility fluctuations (sv)")
        ->capture_default_str();
    simulate->add_option("--length", sim.length, "number of observations")->capture_default_str();
    simulate->add_option("--steps", sim.steps, "intraday steps per bar (gbm, sv)")->capture_default_str();
    simulate->add_option("--start", sim.start, "first bar date (gbm, sv)")->capture_default_str();
    simulate->add_option("--seed", sim.seed, "seed")->envname("LEVERAGE_SEED")->capture_default_str();
    simulate->add_option("-o,--output", sim.output, "write to this file instead of stdout");

    CLI11_PARSE(app, argc, argv);

    try {
        if (ingest->parsed()) {
            try {
                return cmd_ingest(common["ingest"]);
            } catch (const PipelineError&) {
                throw;
            } catch (const std::exception& e) {
                throw PipelineError("*", "ingest", e.what());
            }
        }
        if (simulate->parsed()) {
            try {
                return cmd_simulate(sim);
            } catch (const std::exception& e) {
                throw PipelineError("*", "simulate", e.what());
            }
        }
        for (const auto& cmd : commands) {
            if (!cmd.app->parsed()) continue;
            const auto name = cmd.app->get_name();
            try {
                return cmd_analysis(common[name], analysis[name], cmd.tables);
            } catch (const PipelineError&) {
                throw;
            } catch (const std::exception& e) {
                throw PipelineError("*", "config", e.what());
            }
        }
    } catch (const PipelineError& e) {
        std::cerr << "leverage: error " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "leverage: error " << e.what() << "\n";
        return 1;
    }
    return 1;
}
