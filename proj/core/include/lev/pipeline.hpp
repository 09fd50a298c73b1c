#pragma once

#include "lev/lrd_tests.hpp"
#include "lev/series.hpp"
#include "lev/spectral.hpp"
#include "lev/volatility.hpp"
#include "lev/xcorr.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace lev {

// --- ingestion --------------------------------------------------------------

/// Accepted header names per OHLC field, matched case-insensitively.
struct ColumnMapping {
    std::vector<std::string> date{"date", "timestamp", "time", "day"};
    std::vector<std::string> open{"open", "px_open", "open price", "opening"};
    std::vector<std::string> high{"high", "px_high", "high price"};
    std::vector<std::string> low{"low", "px_low", "low price"};
    std::vector<std::string> close{"close", "px_last", "px_settle", "settle", "last", "close price"};
};

/// Reads a JSON object {"date": [...], "open": [...], ...}; missing keys keep
/// the defaults.
[[nodiscard]] ColumnMapping load_column_mapping(const std::string& path);

struct DateRange {
    std::optional<Date> from;
    std::optional<Date> to;

    [[nodiscard]] bool contains(const Date& d) const noexcept {
        return (!from || !(d < *from)) && (!to || !(*to < d));
    }
};

struct IngestOptions {
    bool strict = false;
    ColumnMapping columns;
};

struct RowIssue {
    std::size_t line = 0;  // 1-based line number in the file
    std::string reason;
};

struct IngestResult {
    OhlcSeries bars;
    std::vector<RowIssue> rejected;   // invariant violations and duplicates
    std::vector<RowIssue> missing;    // rows with empty or NA prices, dropped
    std::vector<std::string> warnings;
};

class IngestError : public std::runtime_error {
public:
    IngestError(std::string path, std::size_t line, const std::string& what)
        : std::runtime_error(path + (line ? ":" + std::to_string(line) : std::string()) + ": " + what),
          path_(std::move(path)),
          line_(line) {}
    [[nodiscard]] const std::string& path() const noexcept { return path_; }
    [[nodiscard]] std::size_t line() const noexcept { return line_; }

private:
    std::string path_;
    std::size_t line_;
};

/// Parses an OHLC CSV, keeps rows within `range`, and returns bars sorted by
/// date. Rows that break the OhlcBar invariants and repeated dates are
/// rejected with their line numbers (strict mode throws on the first one).
/// Throws IngestError for unreadable files, missing columns, an inverted
/// date range, or an empty result.
[[nodiscard]] IngestResult ingest_csv(const std::string& path, const DateRange& range = {},
                                      const IngestOptions& options = {});
[[nodiscard]] IngestResult parse_csv(std::string_view text, const DateRange& range = {},
                                     const IngestOptions& options = {}, const std::string& source = "<memory>");

// --- configuration -----------------------------------------------------------

enum class OutputFormat { Table, Delimited, Structured };

/// Accepts "table", "delimited"/"csv", "structured"/"json". Throws
/// std::invalid_argument otherwise.
[[nodiscard]] OutputFormat parse_format(std::string_view name);

struct InstrumentInput {
    std::string name;
    std::string path;
};

struct PipelineConfig {
    std::vector<InstrumentInput> instruments;
    DateRange range;
    std::size_t window = 20;       // DCCA box size s
    std::size_t lambda = 20;       // DMCA moving-average length
    MaAlignment alignment = MaAlignment::LeftHeavy;
    std::size_t surrogates = 10000;
    std::size_t block_length = 0;  // 0: floor(sqrt(T))
    std::size_t replicas = 1000;
    std::size_t ljung_box_lags = 30;
    std::uint64_t seed = 42;
    OutputFormat format = OutputFormat::Table;
    bool strict = false;
    ColumnMapping columns;
};

/// Throws std::invalid_argument when s, lambda < 3, N < 100, or from >= to.
void validate(const PipelineConfig& cfg);

// Stream tags for the seeds of the randomised stages.
inline constexpr std::uint64_t kDccaStream = 1;
inline constexpr std::uint64_t kDmcaStream = 2;
inline constexpr std::uint64_t kRctStream = 3;

// --- reports -------------------------------------------------------------------

enum Table : unsigned {
    kDescriptive = 1u << 0,
    kMemoryTests = 1u << 1,
    kHurst = 1u << 2,
    kCorrelation = 1u << 3,
    kRescaledCovariance = 1u << 4,
    kAllTables = 0x1Fu,
};

struct LrdPanel {
    TestResult modified_rs;
    TestResult rescaled_variance;
    std::size_t lag = 0;

    friend bool operator==(const LrdPanel&, const LrdPanel&) = default;
};

struct InstrumentReport {
    std::string name;
    std::size_t bars = 0;
    std::size_t observations = 0;  // after dropping non-positive variances
    std::size_t dropped = 0;
    std::string first_date;
    std::string last_date;
    std::vector<std::string> warnings;

    StatsReport raw_returns;
    StatsReport standardized_returns;
    StatsReport log_volatility;

    LrdPanel lrd_raw;
    LrdPanel lrd_standardized;
    LrdPanel lrd_log_volatility;

    HurstEstimate local_whittle;
    HurstEstimate gph;
    HurstEstimate average;

    XCorrEstimate dcca;
    XCorrEstimate dmca;

    double rct_hurst_returns = 0.5;
    double rct_hurst_volatility = 0.5;
    std::size_t rct_block_length = 0;
    TestResult rct;

    friend bool operator==(const InstrumentReport&, const InstrumentReport&) = default;
};

struct ReportSettings {
    std::string from;
    std::string to;
    std::size_t window = 20;
    std::size_t lambda = 20;
    std::size_t surrogates = 10000;
    std::size_t block_length = 0;
    std::size_t replicas = 1000;
    std::size_t ljung_box_lags = 30;
    std::uint64_t seed = 42;

    friend bool operator==(const ReportSettings&, const ReportSettings&) = default;
};

struct ReportBundle {
    ReportSettings settings;
    unsigned tables = kAllTables;
    std::vector<InstrumentReport> instruments;

    friend bool operator==(const ReportBundle&, const ReportBundle&) = default;
};

/// Thrown by every pipeline stage; what() reads "[instrument:stage] message".
class PipelineError : public std::runtime_error {
public:
    PipelineError(std::string instrument, std::string stage, const std::string& message)
        : std::runtime_error("[" + instrument + ":" + stage + "] " + message),
          instrument_(std::move(instrument)),
          stage_(std::move(stage)) {}
    [[nodiscard]] const std::string& instrument() const noexcept { return instrument_; }
    [[nodiscard]] const std::string& stage() const noexcept { return stage_; }

private:
    std::string instrument_;
    std::string stage_;
};

// --- stages --------------------------------------------------------------------

/// Returns, cleaned Garman-Klass variances, standardized returns and log
/// volatility for one instrument, all on the cleaned index set.
struct PreparedInstrument {
    std::string name;
    OhlcSeries bars;
    VolatilitySeries volatility;
    Series returns;       // raw open-close returns, aligned to the cleaned set
    Series standardized;
    Series log_volatility;
};

[[nodiscard]] PreparedInstrument prepare_instrument(std::string name, OhlcSeries bars, bool strict = false);

void run_descriptive(const PreparedInstrument& in, const PipelineConfig& cfg, InstrumentReport& out);
void run_memory_tests(const PreparedInstrument& in, const PipelineConfig& cfg, InstrumentReport& out);
void run_hurst(const PreparedInstrument& in, const PipelineConfig& cfg, InstrumentReport& out);
void run_correlation(const PreparedInstrument& in, const PipelineConfig& cfg, InstrumentReport& out);
void run_rescaled_covariance(const PreparedInstrument& in, const PipelineConfig& cfg, InstrumentReport& out);

/// Runs the selected stages on already prepared data.
[[nodiscard]] InstrumentReport analyse_instrument(const PreparedInstrument& in, const PipelineConfig& cfg,
                                                  unsigned tables = kAllTables);

[[nodiscard]] ReportSettings settings_of(const PipelineConfig& cfg);

/// Ingests every configured instrument and runs the selected stages.
/// Stage failures surface as PipelineError.
[[nodiscard]] ReportBundle run_pipeline(const PipelineConfig& cfg, unsigned tables = kAllTables);

// --- emission ------------------------------------------------------------------

/// Deterministic serialisation of the populated tables.
[[nodiscard]] std::string emit(const ReportBundle& report, OutputFormat format);

/// Inverse of emit(..., OutputFormat::Structured).
[[nodiscard]] ReportBundle parse_structured(std::string_view json);

}  // namespace lev
