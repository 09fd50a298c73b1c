#include "lev/pipeline.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <sstream>

namespace lev {

namespace {

using nlohmann::json;

// --- value formatting ---------------------------------------------------------

std::string fixed(double v, int digits = 4) {
    if (!std::isfinite(v)) return "nan";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    // Avoid printing "-0.0000".
    if (std::string_view(buf).find_first_not_of("-0.") == std::string_view::npos && buf[0] == '-') {
        return std::string(buf + 1);
    }
    return buf;
}

std::string exact(double v) {
    if (!std::isfinite(v)) return "nan";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

// --- row model shared by the table and delimited formats ------------------------

struct Row {
    std::string panel;
    std::string label;
    std::function<std::string(const InstrumentReport&, bool exact_digits)> value;
};

using Value = std::function<double(const InstrumentReport&)>;

Row num(std::string panel, std::string label, Value f) {
    return {std::move(panel), std::move(label),
            [f = std::move(f)](const InstrumentReport& r, bool e) { return e ? exact(f(r)) : fixed(f(r)); }};
}

Row count(std::string panel, std::string label, std::function<std::size_t(const InstrumentReport&)> f) {
    return {std::move(panel), std::move(label),
            [f = std::move(f)](const InstrumentReport& r, bool) { return std::to_string(f(r)); }};
}

Row blank(std::string panel, std::string label) {
    return {std::move(panel), std::move(label), [](const InstrumentReport&, bool) { return std::string("n/a"); }};
}

struct Section {
    std::string key;
    std::string title;
    std::vector<Row> rows;
};

void stats_rows(std::vector<Row>& rows, const std::string& panel, const StatsReport InstrumentReport::*member,
                std::size_t lags) {
    auto pick = [member](auto field) {
        return [member, field](const InstrumentReport& r) { return (r.*member).*field; };
    };
    rows.push_back(num(panel, "Mean", pick(&StatsReport::mean)));
    rows.push_back(num(panel, "SD", pick(&StatsReport::sd)));
    rows.push_back(num(panel, "Skewness", pick(&StatsReport::skewness)));
    rows.push_back(num(panel, "Excess kurtosis", pick(&StatsReport::excess_kurtosis)));
    rows.push_back(num(panel, "Jarque-Bera", pick(&StatsReport::jarque_bera)));
    rows.push_back(num(panel, "  p-value", pick(&StatsReport::jarque_bera_p)));
    rows.push_back(num(panel, "Q(" + std::to_string(lags) + ")", pick(&StatsReport::ljung_box)));
    rows.push_back(num(panel, "  p-value", pick(&StatsReport::ljung_box_p)));
    rows.push_back(blank(panel, "ADF"));
    rows.push_back(blank(panel, "KPSS"));
}

void lrd_rows(std::vector<Row>& rows, const std::string& panel, const LrdPanel InstrumentReport::*member) {
    rows.push_back(num(panel, "V_T (modified R/S)", [member](const InstrumentReport& r) {
        return (r.*member).modified_rs.statistic;
    }));
    rows.push_back(num(panel, "  p-value", [member](const InstrumentReport& r) {
        return (r.*member).modified_rs.p_value;
    }));
    rows.push_back(num(panel, "M_T (rescaled variance)", [member](const InstrumentReport& r) {
        return (r.*member).rescaled_variance.statistic;
    }));
    rows.push_back(num(panel, "  p-value", [member](const InstrumentReport& r) {
        return (r.*member).rescaled_variance.p_value;
    }));
    rows.push_back(count(panel, "Lag q", [member](const InstrumentReport& r) { return (r.*member).lag; }));
}

double p_or_nan(const XCorrEstimate& e) {
    return e.p_value ? *e.p_value : std::numeric_limits<double>::quiet_NaN();
}

std::vector<Section> sections(const ReportBundle& b) {
    std::vector<Section> out;
    const auto& st = b.settings;
    if (b.tables & kDescriptive) {
        Section s{"descriptive", "Table 1. Descriptive statistics", {}};
        stats_rows(s.rows, "Raw returns", &InstrumentReport::raw_returns, st.ljung_box_lags);
        stats_rows(s.rows, "Standardized returns", &InstrumentReport::standardized_returns, st.ljung_box_lags);
        stats_rows(s.rows, "Log volatility", &InstrumentReport::log_volatility, st.ljung_box_lags);
        out.push_back(std::move(s));
    }
    if (b.tables & kMemoryTests) {
        Section s{"memory_tests", "Table 2. Long-range dependence tests", {}};
        lrd_rows(s.rows, "Raw returns", &InstrumentReport::lrd_raw);
        lrd_rows(s.rows, "Standardized returns", &InstrumentReport::lrd_standardized);
        lrd_rows(s.rows, "Log volatility", &InstrumentReport::lrd_log_volatility);
        out.push_back(std::move(s));
    }
    if (b.tables & kHurst) {
        Section s{"hurst", "Table 3. Hurst exponent of log volatility", {}};
        const std::string p = "Log volatility";
        s.rows.push_back(num(p, "Local Whittle", [](const InstrumentReport& r) { return r.local_whittle.h; }));
        s.rows.push_back(num(p, "  Std. error",
                             [](const InstrumentReport& r) { return r.local_whittle.standard_error; }));
        s.rows.push_back(num(p, "GPH", [](const InstrumentReport& r) { return r.gph.h; }));
        s.rows.push_back(num(p, "  Std. error", [](const InstrumentReport& r) { return r.gph.standard_error; }));
        s.rows.push_back(num(p, "Average", [](const InstrumentReport& r) { return r.average.h; }));
        s.rows.push_back(count(p, "Bandwidth m", [](const InstrumentReport& r) { return r.local_whittle.bandwidth; }));
        out.push_back(std::move(s));
    }
    if (b.tables & kCorrelation) {
        Section s{"correlation", "Table 4. Detrended cross-correlation, standardized returns vs log volatility", {}};
        const std::string p = "Leverage";
        s.rows.push_back(num(p, "rho_DCCA(s=" + std::to_string(st.window) + ")",
                             [](const InstrumentReport& r) { return r.dcca.coefficient; }));
        s.rows.push_back(num(p, "  p-value", [](const InstrumentReport& r) { return p_or_nan(r.dcca); }));
        s.rows.push_back(num(p, "rho_DMCA(lambda=" + std::to_string(st.lambda) + ")",
                             [](const InstrumentReport& r) { return r.dmca.coefficient; }));
        s.rows.push_back(num(p, "  p-value", [](const InstrumentReport& r) { return p_or_nan(r.dmca); }));
        out.push_back(std::move(s));
    }
    if (b.tables & kRescaledCovariance) {
        Section s{"rescaled_covariance", "Table 5. Rescaled covariance test", {}};
        const std::string p = "Leverage";
        s.rows.push_back(num(p, "M_xy,T(q)", [](const InstrumentReport& r) { return r.rct.statistic; }));
        s.rows.push_back(num(p, "  p-value", [](const InstrumentReport& r) { return r.rct.p_value; }));
        s.rows.push_back(count(p, "Lag q", [](const InstrumentReport& r) { return r.rct.lag; }));
        s.rows.push_back(num(p, "H (standardized returns)", [](const InstrumentReport& r) {
            return r.rct_hurst_returns;
        }));
        s.rows.push_back(num(p, "H (log volatility)", [](const InstrumentReport& r) {
            return r.rct_hurst_volatility;
        }));
        s.rows.push_back(count(p, "Block length", [](const InstrumentReport& r) { return r.rct_block_length; }));
        out.push_back(std::move(s));
    }
    return out;
}

// --- table -------------------------------------------------------------------------

std::string pad_right(const std::string& s, std::size_t w) { return s.size() >= w ? s + " " : s + std::string(w - s.size(), ' '); }
std::string pad_left(const std::string& s, std::size_t w) { return s.size() >= w ? " " + s : std::string(w - s.size(), ' ') + s; }

std::string emit_table(const ReportBundle& b) {
    constexpr std::size_t label_w = 34;
    std::size_t col_w = 12;
    for (const auto& r : b.instruments) col_w = std::max(col_w, r.name.size() + 2);

    std::ostringstream os;
    const auto& st = b.settings;
    os << "Sample: " << (st.from.empty() ? "start" : st.from) << " to " << (st.to.empty() ? "end" : st.to)
       << "   seed " << st.seed << "\n";
    for (const auto& r : b.instruments) {
        os << "  " << r.name << ": " << r.observations << " observations";
        if (!r.first_date.empty()) os << " (" << r.first_date << " .. " << r.last_date << ")";
        if (r.dropped) os << ", " << r.dropped << " dropped";
        os << "\n";
    }
    if (b.tables & kCorrelation) {
        os << "Surrogates N=" << st.surrogates << "\n";
    }
    if (b.tables & kRescaledCovariance) {
        os << "Bootstrap B=" << st.replicas << ", block "
           << (st.block_length ? std::to_string(st.block_length) : std::string("floor(sqrt(T))")) << "\n";
    }

    for (const auto& sec : sections(b)) {
        os << "\n" << sec.title << "\n" << pad_right("", label_w);
        for (const auto& r : b.instruments) os << pad_left(r.name, col_w);
        os << "\n";
        std::string current;
        for (const auto& row : sec.rows) {
            if (row.panel != current) {
                current = row.panel;
                os << current << "\n";
            }
            os << pad_right("  " + row.label, label_w);
            for (const auto& r : b.instruments) os << pad_left(row.value(r, false), col_w);
            os << "\n";
        }
    }

    bool header = false;
    for (const auto& r : b.instruments) {
        for (const auto& w : r.warnings) {
            if (!header) {
                os << "\nWarnings\n";
                header = true;
            }
            os << "  " << r.name << ": " << w << "\n";
        }
    }
    return os.str();
}

// --- delimited ---------------------------------------------------------------------

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::string trim_label(const std::string& s) {
    const auto p = s.find_first_not_of(' ');
    return p == std::string::npos ? s : s.substr(p);
}

std::string emit_delimited(const ReportBundle& b) {
    std::ostringstream os;
    os << "table,panel,statistic,instrument,value\n";
    for (const auto& sec : sections(b)) {
        std::string last_stat;
        for (const auto& row : sec.rows) {
            // Qualify p-value rows with the statistic they belong to.
            std::string label = trim_label(row.label);
            if (row.label.rfind("  ", 0) == 0) {
                label = last_stat + " " + label;
            } else {
                last_stat = label;
            }
            for (const auto& r : b.instruments) {
                os << sec.key << ',' << csv_field(row.panel) << ',' << csv_field(label) << ','
                   << csv_field(r.name) << ',' << row.value(r, true) << "\n";
            }
        }
    }
    return os.str();
}

// --- structured ----------------------------------------------------------------------

template <class E>
E enum_from(const std::string& s, std::initializer_list<E> values) {
    for (E v : values) {
        if (to_string(v) == s) return v;
    }
    throw std::invalid_argument("unknown enum value '" + s + "'");
}

json num_json(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }
double num_from(const json& j) { return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : j.get<double>(); }

json to_json(const StatsReport& s) {
    return {{"mean", num_json(s.mean)},
            {"sd", num_json(s.sd)},
            {"skewness", num_json(s.skewness)},
            {"excess_kurtosis", num_json(s.excess_kurtosis)},
            {"jarque_bera", num_json(s.jarque_bera)},
            {"jarque_bera_p", num_json(s.jarque_bera_p)},
            {"ljung_box", num_json(s.ljung_box)},
            {"ljung_box_p", num_json(s.ljung_box_p)},
            {"lags", s.lags},
            {"length", s.length}};
}

StatsReport stats_from(const json& j) {
    StatsReport s;
    s.mean = num_from(j.at("mean"));
    s.sd = num_from(j.at("sd"));
    s.skewness = num_from(j.at("skewness"));
    s.excess_kurtosis = num_from(j.at("excess_kurtosis"));
    s.jarque_bera = num_from(j.at("jarque_bera"));
    s.jarque_bera_p = num_from(j.at("jarque_bera_p"));
    s.ljung_box = num_from(j.at("ljung_box"));
    s.ljung_box_p = num_from(j.at("ljung_box_p"));
    s.lags = j.at("lags").get<std::size_t>();
    s.length = j.at("length").get<std::size_t>();
    return s;
}

json to_json(const TestResult& t) {
    return {{"statistic", num_json(t.statistic)},
            {"p_value", num_json(t.p_value)},
            {"lag", t.lag},
            {"kind", std::string(to_string(t.kind))}};
}

TestResult test_from(const json& j) {
    TestResult t;
    t.statistic = num_from(j.at("statistic"));
    t.p_value = num_from(j.at("p_value"));
    t.lag = j.at("lag").get<std::size_t>();
    t.kind = enum_from(j.at("kind").get<std::string>(),
                       {TestKind::ModifiedRescaledRange, TestKind::RescaledVariance, TestKind::LjungBox,
                        TestKind::JarqueBera, TestKind::RescaledCovariance});
    return t;
}

json to_json(const LrdPanel& p) {
    return {{"modified_rs", to_json(p.modified_rs)},
            {"rescaled_variance", to_json(p.rescaled_variance)},
            {"lag", p.lag}};
}

LrdPanel panel_from(const json& j) {
    LrdPanel p;
    p.modified_rs = test_from(j.at("modified_rs"));
    p.rescaled_variance = test_from(j.at("rescaled_variance"));
    p.lag = j.at("lag").get<std::size_t>();
    return p;
}

json to_json(const HurstEstimate& h) {
    return {{"h", num_json(h.h)},
            {"standard_error", num_json(h.standard_error)},
            {"method", std::string(to_string(h.method))},
            {"bandwidth", h.bandwidth},
            {"series_length", h.series_length},
            {"at_boundary", h.at_boundary},
            {"excluded", h.excluded}};
}

HurstEstimate hurst_from(const json& j) {
    HurstEstimate h;
    h.h = num_from(j.at("h"));
    h.standard_error = num_from(j.at("standard_error"));
    h.method = enum_from(j.at("method").get<std::string>(),
                         {HurstMethod::LocalWhittle, HurstMethod::Gph, HurstMethod::Average});
    h.bandwidth = j.at("bandwidth").get<std::size_t>();
    h.series_length = j.at("series_length").get<std::size_t>();
    h.at_boundary = j.at("at_boundary").get<bool>();
    h.excluded = j.at("excluded").get<std::size_t>();
    return h;
}

json to_json(const XCorrEstimate& e) {
    return {{"coefficient", num_json(e.coefficient)},
            {"method", std::string(to_string(e.method))},
            {"window", e.window},
            {"p_value", e.p_value ? num_json(*e.p_value) : json(nullptr)},
            {"surrogates", e.surrogates},
            {"seed", e.seed}};
}

XCorrEstimate xcorr_from(const json& j) {
    XCorrEstimate e;
    e.coefficient = num_from(j.at("coefficient"));
    e.method = enum_from(j.at("method").get<std::string>(), {XCorrMethod::Dcca, XCorrMethod::Dmca});
    e.window = j.at("window").get<std::size_t>();
    if (!j.at("p_value").is_null()) e.p_value = j.at("p_value").get<double>();
    e.surrogates = j.at("surrogates").get<std::size_t>();
    e.seed = j.at("seed").get<std::uint64_t>();
    return e;
}

json to_json(const InstrumentReport& r) {
    return {{"name", r.name},
            {"bars", r.bars},
            {"observations", r.observations},
            {"dropped", r.dropped},
            {"first_date", r.first_date},
            {"last_date", r.last_date},
            {"warnings", r.warnings},
            {"raw_returns", to_json(r.raw_returns)},
            {"standardized_returns", to_json(r.standardized_returns)},
            {"log_volatility", to_json(r.log_volatility)},
            {"lrd_raw", to_json(r.lrd_raw)},
            {"lrd_standardized", to_json(r.lrd_standardized)},
            {"lrd_log_volatility", to_json(r.lrd_log_volatility)},
            {"local_whittle", to_json(r.local_whittle)},
            {"gph", to_json(r.gph)},
            {"average", to_json(r.average)},
            {"dcca", to_json(r.dcca)},
            {"dmca", to_json(r.dmca)},
            {"rct_hurst_returns", num_json(r.rct_hurst_returns)},
            {"rct_hurst_volatility", num_json(r.rct_hurst_volatility)},
            {"rct_block_length", r.rct_block_length},
            {"rct", to_json(r.rct)}};
}

InstrumentReport instrument_from(const json& j) {
    InstrumentReport r;
    r.name = j.at("name").get<std::string>();
    r.bars = j.at("bars").get<std::size_t>();
    r.observations = j.at("observations").get<std::size_t>();
    r.dropped = j.at("dropped").get<std::size_t>();
    r.first_date = j.at("first_date").get<std::string>();
    r.last_date = j.at("last_date").get<std::string>();
    r.warnings = j.at("warnings").get<std::vector<std::string>>();
    r.raw_returns = stats_from(j.at("raw_returns"));
    r.standardized_returns = stats_from(j.at("standardized_returns"));
    r.log_volatility = stats_from(j.at("log_volatility"));
    r.lrd_raw = panel_from(j.at("lrd_raw"));
    r.lrd_standardized = panel_from(j.at("lrd_standardized"));
    r.lrd_log_volatility = panel_from(j.at("lrd_log_volatility"));
    r.local_whittle = hurst_from(j.at("local_whittle"));
    r.gph = hurst_from(j.at("gph"));
    r.average = hurst_from(j.at("average"));
    r.dcca = xcorr_from(j.at("dcca"));
    r.dmca = xcorr_from(j.at("dmca"));
    r.rct_hurst_returns = num_from(j.at("rct_hurst_returns"));
    r.rct_hurst_volatility = num_from(j.at("rct_hurst_volatility"));
    r.rct_block_length = j.at("rct_block_length").get<std::size_t>();
    r.rct = test_from(j.at("rct"));
    return r;
}

std::string emit_structured(const ReportBundle& b) {
    const auto& st = b.settings;
    json settings = {{"from", st.from},
                     {"to", st.to},
                     {"window", st.window},
                     {"lambda", st.lambda},
                     {"surrogates", st.surrogates},
                     {"block_length", st.block_length},
                     {"replicas", st.replicas},
                     {"ljung_box_lags", st.ljung_box_lags},
                     {"seed", st.seed}};
    json tables = json::array();
    for (const auto& sec : sections(b)) tables.push_back(sec.key);
    json instruments = json::array();
    for (const auto& r : b.instruments) instruments.push_back(to_json(r));
    json root = {{"settings", settings}, {"tables", tables}, {"table_mask", b.tables}, {"instruments", instruments}};
    return root.dump(2) + "\n";
}

}  // namespace

std::string emit(const ReportBundle& report, OutputFormat format) {
    switch (format) {
        case OutputFormat::Table: return emit_table(report);
        case OutputFormat::Delimited: return emit_delimited(report);
        case OutputFormat::Structured: return emit_structured(report);
    }
    throw std::invalid_argument("unknown output format");
}

ReportBundle parse_structured(std::string_view text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("malformed report: ") + e.what());
    }
    try {
        ReportBundle b;
        const auto& st = root.at("settings");
        b.settings.from = st.at("from").get<std::string>();
        b.settings.to = st.at("to").get<std::string>();
        b.settings.window = st.at("window").get<std::size_t>();
        b.settings.lambda = st.at("lambda").get<std::size_t>();
        b.settings.surrogates = st.at("surrogates").get<std::size_t>();
        b.settings.block_length = st.at("block_length").get<std::size_t>();
        b.settings.replicas = st.at("replicas").get<std::size_t>();
        b.settings.ljung_box_lags = st.at("ljung_box_lags").get<std::size_t>();
        b.settings.seed = st.at("seed").get<std::uint64_t>();
        b.tables = root.at("table_mask").get<unsigned>();
        for (const auto& r : root.at("instruments")) b.instruments.push_back(instrument_from(r));
        return b;
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("malformed report: ") + e.what());
    }
}

}  // namespace lev
