#pragma once

#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "mrp/error.hpp"
#include "mrp/random.hpp"
#include "mrp/series.hpp"

namespace mrp {

enum class CsvLayout { wide, long_format };
enum class MissingPolicy { skip, error };
enum class ReturnUnits { decimal, percent };
enum class ReturnType { simple, log };

/// How to read a factor-return file.
///
/// Wide layout: one date column plus one column per strategy (all non-date
/// columns unless value_columns names a subset). Long layout: one row per
/// (name, date, return). Rows dated before start_date are dropped.
struct IngestConfig {
    std::filesystem::path path;
    CsvLayout layout = CsvLayout::wide;
    std::string date_column = "date";
    std::vector<std::string> value_columns;
    std::string name_column = "name";
    std::string return_column = "ret";
    Date start_date{std::chrono::year{1980}, std::chrono::January, std::chrono::day{1}};
    Frequency frequency = Frequency::daily;
    MissingPolicy missing = MissingPolicy::skip;
    ReturnUnits units = ReturnUnits::decimal;
    ReturnType return_type = ReturnType::simple;
    char delimiter = ',';
};

namespace detail {

inline std::string_view trim(std::string_view s)
{
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

/// Splits one record. Double quotes group a field and "" inside quotes is a literal quote.
inline std::vector<std::string> split_record(std::string_view line, char delim)
{
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                cur += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                cur += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == delim) {
            fields.emplace_back(trim(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    fields.emplace_back(trim(cur));
    return fields;
}

inline bool is_missing(std::string_view s)
{
    return s.empty() || s == "NA" || s == "NaN" || s == "nan" || s == "null" || s == "NULL";
}

inline bool parse_double(std::string_view s, double& out)
{
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc{} && ptr == s.data() + s.size() && std::isfinite(out);
}

struct SeriesBuilder {
    std::string label;
    std::vector<Date> dates;
    std::vector<double> returns;
    bool seen_any = false;
    Date last_seen{};
};

inline double convert_return(double raw, const IngestConfig& cfg)
{
    double r = cfg.units == ReturnUnits::percent ? raw / 100.0 : raw;
    if (cfg.return_type == ReturnType::log) r = std::expm1(r);
    return r;
}

inline void append(SeriesBuilder& b, const Date& date, double value, const IngestConfig& cfg,
                   std::size_t row, std::size_t col)
{
    using std::chrono::sys_days;
    if (b.seen_any && !(sys_days{b.last_seen} < sys_days{date}))
        throw Error(Errc::date_order_error, "series '" + b.label + "' row " + std::to_string(row) +
                                                " column " + std::to_string(col) + ": date " +
                                                format_iso_date(date) + " does not follow " +
                                                format_iso_date(b.last_seen));
    b.seen_any = true;
    b.last_seen = date;
    if (sys_days{date} < sys_days{cfg.start_date}) return;
    b.dates.push_back(date);
    b.returns.push_back(convert_return(value, cfg));
}

inline std::size_t find_column(const std::vector<std::string>& header, const std::string& name)
{
    for (std::size_t c = 0; c < header.size(); ++c)
        if (header[c] == name) return c;
    throw ParseError(1, 0, "missing column '" + name + "'");
}

} // namespace detail

/// Reads return series from delimited text with a header row.
///
/// Errors: ParseError(row, column) on a bad date or number, DateOrderError
/// when a series' dates are not strictly increasing, EmptySeries when a
/// series has no rows on or after start_date.
inline std::vector<ReturnSeries> load_csv(std::istream& in, const IngestConfig& cfg)
{
    std::string line;
    if (!std::getline(in, line)) throw Error(Errc::empty_series, "input has no header row");
    if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
    const auto header = detail::split_record(line, cfg.delimiter);
    const std::size_t date_col = detail::find_column(header, cfg.date_column);

    std::vector<detail::SeriesBuilder> builders;
    std::vector<std::size_t> value_cols;            // wide
    std::map<std::string, std::size_t> by_name;     // long: label -> builder index
    std::size_t name_col = 0, ret_col = 0;

    if (cfg.layout == CsvLayout::wide) {
        if (cfg.value_columns.empty()) {
            for (std::size_t c = 0; c < header.size(); ++c)
                if (c != date_col) value_cols.push_back(c);
        } else {
            for (const auto& name : cfg.value_columns) value_cols.push_back(detail::find_column(header, name));
        }
        if (value_cols.empty()) throw ParseError(1, 0, "no value columns");
        for (std::size_t c : value_cols) builders.push_back({header[c], {}, {}, false, {}});
    } else {
        name_col = detail::find_column(header, cfg.name_column);
        ret_col = detail::find_column(header, cfg.return_column);
    }

    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (detail::trim(line).empty()) continue;
        const auto fields = detail::split_record(line, cfg.delimiter);
        auto field = [&](std::size_t c) -> const std::string& {
            if (c >= fields.size()) throw ParseError(row, c, "row has only " + std::to_string(fields.size()) + " fields");
            return fields[c];
        };
        const auto date = parse_iso_date(field(date_col));
        if (!date) throw ParseError(row, date_col, "unparseable date '" + field(date_col) + "'");

        auto take = [&](detail::SeriesBuilder& b, std::size_t c) {
            const std::string& text = field(c);
            if (detail::is_missing(text)) {
                if (cfg.missing == MissingPolicy::error) throw ParseError(row, c, "missing value");
                return;
            }
            double v = 0.0;
            if (!detail::parse_double(text, v)) throw ParseError(row, c, "unparseable number '" + text + "'");
            detail::append(b, *date, v, cfg, row, c);
        };

        if (cfg.layout == CsvLayout::wide) {
            for (std::size_t k = 0; k < value_cols.size(); ++k) take(builders[k], value_cols[k]);
        } else {
            const std::string& name = field(name_col);
            auto [it, inserted] = by_name.try_emplace(name, builders.size());
            if (inserted) builders.push_back({name, {}, {}, false, {}});
            take(builders[it->second], ret_col);
        }
    }

    if (builders.empty()) throw Error(Errc::empty_series, "no data rows");
    std::vector<ReturnSeries> out;
    out.reserve(builders.size());
    for (auto& b : builders) {
        if (b.returns.empty())
            throw Error(Errc::empty_series, "series '" + b.label + "' has no rows on or after " +
                                                format_iso_date(cfg.start_date));
        out.emplace_back(b.label, cfg.frequency, std::move(b.dates), std::move(b.returns));
    }
    return out;
}

inline std::vector<ReturnSeries> load_csv(const IngestConfig& cfg)
{
    std::ifstream in(cfg.path);
    if (!in) throw Error(Errc::invalid_argument, "cannot open " + cfg.path.string());
    return load_csv(in, cfg);
}

// ---------------------------------------------------------------------------
// Writing

/// Shortest text that keeps 12 significant digits.
inline std::string format_sig12(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

/// Wide CSV over the union of dates; a series without a given date gets an empty cell.
inline void write_csv(std::ostream& out, const std::vector<ReturnSeries>& series)
{
    using std::chrono::sys_days;
    out << "date";
    for (const auto& s : series) out << ',' << s.label();
    out << '\n';
    std::map<sys_days, std::vector<std::string>> rows;
    for (std::size_t k = 0; k < series.size(); ++k) {
        for (std::size_t i = 0; i < series[k].size(); ++i) {
            auto& cells = rows[sys_days{series[k].date(i)}];
            cells.resize(series.size());
            cells[k] = format_sig12(series[k][i]);
        }
    }
    for (auto& [day, cells] : rows) {
        cells.resize(series.size());
        out << format_iso_date(Date{day});
        for (const auto& c : cells) out << ',' << c;
        out << '\n';
    }
}

inline void write_csv(const std::filesystem::path& path, const std::vector<ReturnSeries>& series)
{
    std::ofstream out(path);
    if (!out) throw Error(Errc::invalid_argument, "cannot write " + path.string());
    write_csv(out, series);
}

// ---------------------------------------------------------------------------
// Synthetic fixtures

/// Two-regime Gaussian returns: N(drift_before, vol_before^2) for indices
/// below break_index, N(drift_after, vol_after^2) from break_index on.
struct FixtureSpec {
    std::size_t length = 2520;
    std::size_t break_index = 1260;
    double drift_before = 0.0008;
    double drift_after = -0.0008;
    double vol_before = 0.01;
    double vol_after = 0.01;
    Date start_date{std::chrono::year{1980}, std::chrono::January, std::chrono::day{2}};
    Frequency frequency = Frequency::daily;
    std::string label = "fixture";
};

/// `count` calendar dates from `start`: weekdays for daily data, month ends for monthly.
inline std::vector<Date> calendar(const Date& start, std::size_t count, Frequency f)
{
    using namespace std::chrono;
    std::vector<Date> out;
    out.reserve(count);
    if (f == Frequency::daily) {
        sys_days d{start};
        while (out.size() < count) {
            const unsigned wd = weekday{d}.c_encoding();
            if (wd != 0 && wd != 6) out.emplace_back(d);
            d += days{1};
        }
    } else {
        year_month ym{start.year(), start.month()};
        while (out.size() < count) {
            out.emplace_back(year_month_day_last{ym.year(), month_day_last{ym.month()}});
            ym += months{1};
        }
    }
    return out;
}

/// Deterministic in (seed, spec). Values are rounded to 12 significant
/// digits so the series survives write_csv / load_csv unchanged.
inline ReturnSeries make_fixture(std::uint64_t seed, const FixtureSpec& spec)
{
    if (spec.length < 1) throw Error(Errc::invalid_argument, "fixture length must be at least 1");
    if (spec.vol_before < 0.0 || spec.vol_after < 0.0)
        throw Error(Errc::invalid_argument, "fixture volatility must be non-negative");
    CounterRng rng(seed, 0);
    std::vector<double> returns(spec.length);
    for (std::size_t i = 0; i < spec.length; ++i) {
        const bool before = i < spec.break_index;
        const double mu = before ? spec.drift_before : spec.drift_after;
        const double sd = before ? spec.vol_before : spec.vol_after;
        const double raw = mu + sd * rng.normal();
        returns[i] = std::strtod(format_sig12(raw).c_str(), nullptr);
    }
    return ReturnSeries(spec.label, spec.frequency, calendar(spec.start_date, spec.length, spec.frequency),
                        std::move(returns));
}

} // namespace mrp
