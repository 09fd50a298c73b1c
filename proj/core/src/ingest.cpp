#include "lev/pipeline.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>

namespace lev {

namespace {

std::string lower_trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
    std::string out(s);
    for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

// Splits one CSV record. Quoted fields may contain the delimiter; embedded
// newlines are not supported.
std::vector<std::string> split_record(std::string_view line, char delim) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (c == '"') {
            if (quoted && i + 1 < line.size() && line[i + 1] == '"') {
                cur.push_back('"');
                ++i;
            } else {
                quoted = !quoted;
            }
        } else if (c == delim && !quoted) {
            fields.push_back(std::move(cur));
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    fields.push_back(std::move(cur));
    return fields;
}

char sniff_delimiter(std::string_view header) {
    std::size_t best_count = 0;
    char best = ',';
    for (char c : {',', ';', '\t'}) {
        const auto n = static_cast<std::size_t>(std::count(header.begin(), header.end(), c));
        if (n > best_count) {
            best_count = n;
            best = c;
        }
    }
    return best;
}

std::optional<std::size_t> find_column(const std::vector<std::string>& header,
                                       const std::vector<std::string>& aliases) {
    for (const auto& alias : aliases) {
        const std::string want = lower_trim(alias);
        for (std::size_t i = 0; i < header.size(); ++i) {
            if (header[i] == want) return i;
        }
    }
    return std::nullopt;
}

bool is_missing(std::string_view field) {
    const std::string v = lower_trim(field);
    return v.empty() || v == "na" || v == "n/a" || v == "nan" || v == "null" || v == "." || v == "-";
}

std::optional<double> parse_number(std::string_view field) {
    std::string v = lower_trim(field);
    double out = 0.0;
    const char* first = v.data();
    const char* last = v.data() + v.size();
    if (first != last && *first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, last, out);
    if (ec != std::errc{} || ptr != last || !std::isfinite(out)) return std::nullopt;
    return out;
}

// Accepts YYYY-MM-DD optionally followed by a time part.
Date parse_row_date(std::string_view field) {
    std::string v = lower_trim(field);
    if (v.size() > 10 && (v[10] == ' ' || v[10] == 't')) v.resize(10);
    return parse_date(v);
}

}  // namespace

ColumnMapping load_column_mapping(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IngestError(path, 0, "cannot open column mapping");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw IngestError(path, 0, std::string("invalid column mapping: ") + e.what());
    }
    if (!j.is_object()) throw IngestError(path, 0, "column mapping must be a JSON object");

    ColumnMapping m;
    const std::array<std::pair<const char*, std::vector<std::string>*>, 5> fields{{
        {"date", &m.date}, {"open", &m.open}, {"high", &m.high}, {"low", &m.low}, {"close", &m.close}}};
    for (const auto& [key, target] : fields) {
        if (!j.contains(key)) continue;
        const auto& v = j.at(key);
        std::vector<std::string> names;
        if (v.is_string()) {
            names.push_back(v.get<std::string>());
        } else if (v.is_array()) {
            for (const auto& e : v) names.push_back(e.get<std::string>());
        } else {
            throw IngestError(path, 0, std::string("mapping for '") + key + "' must be a string or list");
        }
        // Vendor names take precedence over the defaults.
        names.insert(names.end(), target->begin(), target->end());
        *target = std::move(names);
    }
    return m;
}

IngestResult parse_csv(std::string_view text, const DateRange& range, const IngestOptions& options,
                       const std::string& source) {
    if (range.from && range.to && !(*range.from < *range.to)) {
        throw IngestError(source, 0, "empty date range: start must precede end");
    }

    IngestResult result;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    auto next_line = [&](std::string_view& line) {
        while (pos < text.size()) {
            std::size_t end = text.find('\n', pos);
            if (end == std::string_view::npos) end = text.size();
            line = text.substr(pos, end - pos);
            pos = end + 1;
            ++line_no;
            if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
            if (!lower_trim(line).empty()) return true;
        }
        return false;
    };

    std::string_view line;
    if (!next_line(line)) throw IngestError(source, 0, "file is empty");
    if (line.size() >= 3 && line.substr(0, 3) == "\xEF\xBB\xBF") line.remove_prefix(3);
    const char delim = sniff_delimiter(line);
    std::vector<std::string> header;
    for (const auto& f : split_record(line, delim)) header.push_back(lower_trim(f));

    const auto& cols = options.columns;
    const std::array<std::pair<const char*, const std::vector<std::string>*>, 5> wanted{{
        {"date", &cols.date}, {"open", &cols.open}, {"high", &cols.high}, {"low", &cols.low}, {"close", &cols.close}}};
    std::array<std::size_t, 5> idx{};
    for (std::size_t k = 0; k < wanted.size(); ++k) {
        const auto found = find_column(header, *wanted[k].second);
        if (!found) throw IngestError(source, line_no, std::string("no column found for '") + wanted[k].first + "'");
        idx[k] = *found;
    }
    const std::size_t needed = *std::max_element(idx.begin(), idx.end()) + 1;

    struct Row {
        OhlcBar bar;
        std::size_t line;
    };
    std::vector<Row> rows;
    std::set<Date> seen;

    auto reject = [&](std::size_t at, std::string reason) {
        if (options.strict) throw IngestError(source, at, reason);
        result.rejected.push_back({at, std::move(reason)});
    };

    while (next_line(line)) {
        const auto fields = split_record(line, delim);
        if (fields.size() < needed) {
            reject(line_no, "expected at least " + std::to_string(needed) + " fields, found " +
                                std::to_string(fields.size()));
            continue;
        }
        Date date;
        try {
            date = parse_row_date(fields[idx[0]]);
        } catch (const std::invalid_argument&) {
            reject(line_no, "unparseable date '" + fields[idx[0]] + "'");
            continue;
        }
        if (!range.contains(date)) continue;

        std::array<double, 4> px{};
        bool missing = false;
        bool bad = false;
        for (std::size_t k = 1; k < 5; ++k) {
            const auto& f = fields[idx[k]];
            if (is_missing(f)) {
                missing = true;
                break;
            }
            const auto v = parse_number(f);
            if (!v) {
                reject(line_no, std::string("unparseable ") + wanted[k].first + " '" + f + "'");
                bad = true;
                break;
            }
            px[k - 1] = *v;
        }
        if (bad) continue;
        if (missing) {
            result.missing.push_back({line_no, "missing price on " + format_date(date)});
            continue;
        }

        OhlcBar bar{date, px[0], px[1], px[2], px[3]};
        if (auto why = bar_violation(bar); !why.empty()) {
            reject(line_no, format_date(date) + ": " + why);
            continue;
        }
        if (!seen.insert(date).second) {
            const std::string msg = "duplicate date " + format_date(date) + " ignored";
            reject(line_no, msg);
            result.warnings.push_back(source + ":" + std::to_string(line_no) + ": " + msg);
            continue;
        }
        rows.push_back({bar, line_no});
    }

    std::stable_sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) { return a.bar.date < b.bar.date; });
    result.bars.reserve(rows.size());
    for (const auto& r : rows) result.bars.push_back(r.bar);

    if (!result.missing.empty()) {
        result.warnings.push_back(source + ": dropped " + std::to_string(result.missing.size()) +
                                  " row(s) with missing prices");
    }
    if (result.bars.empty()) throw IngestError(source, 0, "no valid bars in the requested date range");
    return result;
}

IngestResult ingest_csv(const std::string& path, const DateRange& range, const IngestOptions& options) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IngestError(path, 0, "cannot open file");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_csv(buf.str(), range, options, path);
}

OutputFormat parse_format(std::string_view name) {
    const std::string v = lower_trim(name);
    if (v == "table") return OutputFormat::Table;
    if (v == "delimited" || v == "csv") return OutputFormat::Delimited;
    if (v == "structured" || v == "json") return OutputFormat::Structured;
    throw std::invalid_argument("unknown output format '" + std::string(name) + "'");
}

}  // namespace lev
