#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mrp/mrp.hpp"

namespace mrp::cli {

/// Bad flag values detected after CLI11 parsing; exit code 2 like parse errors.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Shortest %g text, used for horizon labels like "2.5".
inline std::string format_number(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

// ---------------------------------------------------------------------------
// Horizons: "2y" (years, scaled by frequency) or "504p" (periods)

struct Horizon {
    double amount = 0.0;
    bool years = true;

    std::size_t periods(Frequency f) const
    {
        if (years) return years_to_periods(amount, f);
        return static_cast<std::size_t>(amount);
    }
};

inline Horizon parse_horizon(const std::string& text)
{
    if (text.size() < 2) throw UsageError("horizon '" + text + "' needs a number and a y/p suffix");
    const char unit = text.back();
    const std::string number = text.substr(0, text.size() - 1);
    if (unit != 'y' && unit != 'p') throw UsageError("horizon '" + text + "' must end in y (years) or p (periods)");
    if (number.find_first_of("yp") != std::string::npos) throw UsageError("conflicting units in '" + text + "'");
    double v = 0.0;
    if (!detail::parse_double(number, v) || !(v > 0.0)) throw UsageError("bad horizon '" + text + "'");
    if (unit == 'p' && v != std::floor(v)) throw UsageError("period count '" + text + "' must be an integer");
    return {v, unit == 'y'};
}

/// "10:40:10y" (start:stop:step) or "10,20,40y" with one trailing unit, or
/// per-item units "1y,504p".
inline std::vector<Horizon> parse_horizon_list(const std::string& text)
{
    if (text.empty()) throw UsageError("empty horizon list");
    const char unit = text.back();
    if (text.find(':') != std::string::npos) {
        if (unit != 'y' && unit != 'p') throw UsageError("range '" + text + "' must end in y or p");
        const std::string body = text.substr(0, text.size() - 1);
        std::vector<double> parts;
        std::stringstream ss(body);
        for (std::string item; std::getline(ss, item, ':');) {
            double v = 0.0;
            if (!detail::parse_double(item, v)) throw UsageError("bad range '" + text + "'");
            parts.push_back(v);
        }
        if (parts.size() != 3 || !(parts[2] > 0.0) || parts[1] < parts[0])
            throw UsageError("range '" + text + "' must be start:stop:step with step > 0");
        std::vector<Horizon> out;
        for (double v = parts[0]; v <= parts[1] + 1e-9 * parts[2]; v += parts[2])
            out.push_back(parse_horizon(format_number(v) + unit));
        return out;
    }
    std::vector<std::string> items;
    std::stringstream ss(text);
    for (std::string item; std::getline(ss, item, ',');) items.push_back(item);
    std::vector<Horizon> out;
    for (auto& item : items) {
        if (item.empty()) throw UsageError("empty item in '" + text + "'");
        if (item.back() != 'y' && item.back() != 'p') item += unit;
        out.push_back(parse_horizon(item));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Output tables

struct Missing {
    std::string csv_marker = "NA";
};

using Cell = std::variant<std::string, double, std::int64_t, bool, Missing>;

/// Rows of named cells rendered as CSV or as a JSON array of objects. Reals
/// are rounded to 6 decimals for both formats so they carry the same values.
struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
};

inline std::string fixed6(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    std::string s = buf;
    if (s == "-0.000000") s = "0.000000";
    return s;
}

inline std::string csv_escape(const std::string& s)
{
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

inline void write_table_csv(std::ostream& out, const Table& t)
{
    for (std::size_t c = 0; c < t.columns.size(); ++c) out << (c ? "," : "") << csv_escape(t.columns[c]);
    out << '\n';
    for (const auto& row : t.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c) out << ',';
            std::visit(
                [&](const auto& v) {
                    using V = std::decay_t<decltype(v)>;
                    if constexpr (std::is_same_v<V, std::string>) out << csv_escape(v);
                    else if constexpr (std::is_same_v<V, double>) out << fixed6(v);
                    else if constexpr (std::is_same_v<V, std::int64_t>) out << v;
                    else if constexpr (std::is_same_v<V, bool>) out << (v ? "true" : "false");
                    else out << v.csv_marker;
                },
                row[c]);
        }
        out << '\n';
    }
}

inline nlohmann::ordered_json table_json(const Table& t)
{
    auto arr = nlohmann::ordered_json::array();
    for (const auto& row : t.rows) {
        nlohmann::ordered_json obj = nlohmann::ordered_json::object();
        for (std::size_t c = 0; c < row.size(); ++c) {
            std::visit(
                [&](const auto& v) {
                    using V = std::decay_t<decltype(v)>;
                    if constexpr (std::is_same_v<V, double>) obj[t.columns[c]] = std::strtod(fixed6(v).c_str(), nullptr);
                    else if constexpr (std::is_same_v<V, Missing>) obj[t.columns[c]] = nullptr;
                    else obj[t.columns[c]] = v;
                },
                row[c]);
        }
        arr.push_back(std::move(obj));
    }
    return arr;
}

// ---------------------------------------------------------------------------

struct SharedOptions {
    std::string input;
    std::string start_date = "1980-01-01";
    std::string frequency = "daily";
    std::string layout = "wide";
    std::vector<std::string> columns;
    bool percent = false;
    bool log_returns = false;
    std::string missing = "skip";
    std::string metric = "sharpe";
    double mar = 0.0;
    std::string benchmark;
    std::size_t splits = 1;
    std::string min_segment = "2y";
    std::string lookback = "40y";
    std::uint64_t seed = 1;
    std::string out;
    std::string format = "csv";
    unsigned jobs = 1;
};

inline void add_shared(CLI::App& sub, SharedOptions& o)
{
    sub.add_option("--input,-i", o.input, "Factor-return CSV");
    sub.add_option("--start-date", o.start_date, "Drop rows before this ISO date")->capture_default_str();
    sub.add_option("--frequency", o.frequency, "daily | monthly")->check(CLI::IsMember({"daily", "monthly"}))->capture_default_str();
    sub.add_option("--layout", o.layout, "wide | long")->check(CLI::IsMember({"wide", "long"}))->capture_default_str();
    sub.add_option("--columns", o.columns, "Subset of value columns (wide layout)")->delimiter(',');
    sub.add_flag("--percent", o.percent, "Input returns are in percent");
    sub.add_flag("--log-returns", o.log_returns, "Input returns are log returns");
    sub.add_option("--missing", o.missing, "skip | error")->check(CLI::IsMember({"skip", "error"}))->capture_default_str();
    sub.add_option("--metric", o.metric, "sharpe | sortino | ir")->check(CLI::IsMember({"sharpe", "sortino", "ir"}))->capture_default_str();
    sub.add_option("--mar", o.mar, "Minimum acceptable return per period (sortino)");
    sub.add_option("--benchmark", o.benchmark, "Benchmark column for --metric ir");
    sub.add_option("--splits,-s", o.splits, "Number of splits s")->check(CLI::PositiveNumber)->capture_default_str();
    sub.add_option("--min-segment,-d", o.min_segment, "Minimum regime length, e.g. 2y or 504p")->capture_default_str();
    sub.add_option("--lookback", o.lookback, "Trailing window, e.g. 40y, 10080p or all")->capture_default_str();
    sub.add_option("--seed", o.seed, "Random seed")->capture_default_str();
    sub.add_option("--out,-o", o.out, "Output file (default stdout)");
    sub.add_option("--format", o.format, "csv | json")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
    sub.add_option("--jobs,-j", o.jobs, "Worker threads")->check(CLI::PositiveNumber)->capture_default_str();
}

inline Frequency frequency_of(const SharedOptions& o) { return *parse_frequency(o.frequency); }

inline MetricKind metric_of(const SharedOptions& o)
{
    if (o.metric == "sortino") return Sortino{o.mar};
    if (o.metric == "ir") return InformationRatio{};
    return Sharpe{};
}

inline std::vector<ReturnSeries> load_input(const SharedOptions& o)
{
    if (o.input.empty()) throw UsageError("--input is required");
    IngestConfig cfg;
    cfg.path = o.input;
    cfg.layout = o.layout == "long" ? CsvLayout::long_format : CsvLayout::wide;
    const auto start = parse_iso_date(o.start_date);
    if (!start) throw UsageError("bad --start-date '" + o.start_date + "'");
    cfg.start_date = *start;
    cfg.frequency = frequency_of(o);
    cfg.missing = o.missing == "error" ? MissingPolicy::error : MissingPolicy::skip;
    cfg.units = o.percent ? ReturnUnits::percent : ReturnUnits::decimal;
    cfg.return_type = o.log_returns ? ReturnType::log : ReturnType::simple;
    if (!o.columns.empty() && cfg.layout == CsvLayout::wide) {
        cfg.value_columns = o.columns;
        if (!o.benchmark.empty()) cfg.value_columns.push_back(o.benchmark);
    }
    auto all = load_csv(cfg);

    if (o.metric == "ir") {
        if (o.benchmark.empty()) throw UsageError("--metric ir needs --benchmark");
        auto bench = std::find_if(all.begin(), all.end(), [&](const auto& s) { return s.label() == o.benchmark; });
        if (bench == all.end()) throw UsageError("benchmark column '" + o.benchmark + "' not found");
        const ReturnSeries b = *bench;
        std::vector<ReturnSeries> active;
        for (const auto& s : all)
            if (s.label() != o.benchmark) active.push_back(active_returns(s, b).with_label(s.label()));
        return active;
    }
    if (!o.benchmark.empty()) throw UsageError("--benchmark only applies to --metric ir");
    return all;
}

inline std::size_t min_segment_periods(const SharedOptions& o) { return parse_horizon(o.min_segment).periods(frequency_of(o)); }

/// Trailing window of the requested lookback; "all" keeps the whole series.
inline ReturnSeries apply_lookback(const ReturnSeries& s, const SharedOptions& o)
{
    if (o.lookback == "all") return s;
    return s.tail(parse_horizon(o.lookback).periods(s.frequency()));
}

inline void emit(const Table& t, const SharedOptions& o, std::ostream& stdout_stream)
{
    std::ofstream file;
    std::ostream* out = &stdout_stream;
    if (!o.out.empty()) {
        file.open(o.out, std::ios::binary);
        if (!file) throw Error(Errc::invalid_argument, "cannot write " + o.out);
        out = &file;
    }
    if (o.format == "json") *out << table_json(t).dump(2) << '\n';
    else write_table_csv(*out, t);
}

inline std::string years_text(std::size_t periods, int ppy) { return format_number(static_cast<double>(periods) / ppy); }

// ---------------------------------------------------------------------------
// Subcommands

inline std::vector<FactorReport> reports_for(const std::vector<ReturnSeries>& all, const SharedOptions& o)
{
    const std::size_t d = min_segment_periods(o);
    std::vector<FactorReport> reports(all.size());
    parallel_for(all.size(), o.jobs, [&](std::size_t k) {
        const ReturnSeries window = apply_lookback(all[k], o);
        reports[k] = factor_report(window, window.size(), d, metric_of(o));
    });
    return reports;
}

inline Table run_report(const SharedOptions& o)
{
    const auto all = load_input(o);
    Table t;
    if (o.splits == 1) {
        t.columns = {"label", "sr", "mrp", "left_sr", "right_sr", "split_date"};
        for (const auto& r : reports_for(all, o))
            t.rows.push_back({r.label, r.full_sharpe, r.mrp1, r.left_sr, r.right_sr, format_short_date(r.split_date)});
        return t;
    }
    t.columns = {"label", "sr", "mrp", "argmin_segment", "split_dates"};
    const std::size_t d = min_segment_periods(o);
    std::vector<std::vector<Cell>> rows(all.size());
    for (std::size_t k = 0; k < all.size(); ++k) {
        const ReturnSeries window = apply_lookback(all[k], o);
        const auto r = mrp_fast(window, o.splits, d, {metric_of(o), o.jobs});
        std::string dates;
        for (const auto& dt : r.split_dates) dates += (dates.empty() ? "" : ";") + format_short_date(dt);
        rows[k] = {window.label(), full_metric(window, metric_of(o)), r.value,
                   static_cast<std::int64_t>(r.argmin_segment), dates};
    }
    t.rows = std::move(rows);
    return t;
}

inline Table run_frontier(const SharedOptions& o)
{
    if (o.splits != 1) throw UsageError("frontier uses the one-split MRP; drop --splits");
    const auto points = frontier(reports_for(load_input(o), o));
    Table t;
    t.columns = {"label", "sharpe", "mrp", "dominated", "dominated_by"};
    for (const auto& p : points) {
        std::string by;
        for (const auto& l : p.dominated_by) by += (by.empty() ? "" : ";") + l;
        t.rows.push_back({p.label, p.x, p.y, p.dominated, by});
    }
    return t;
}

struct SensitivityFlags {
    std::string lookbacks = "10:40:10y";
    std::string ds = "1:5:1y";
    std::string aggregate = "none";
};

inline Table run_sensitivity(const SharedOptions& o, const SensitivityFlags& f)
{
    const auto all = load_input(o);
    const Frequency freq = frequency_of(o);
    std::vector<std::size_t> lookbacks, ds;
    for (const auto& h : parse_horizon_list(f.lookbacks)) lookbacks.push_back(h.periods(freq));
    for (const auto& h : parse_horizon_list(f.ds)) ds.push_back(h.periods(freq));
    const int ppy = periods_per_year(freq);

    Table t;
    const Missing infeasible{"Infeasible"};
    if (f.aggregate == "none") t.columns = {"label", "lookback_years", "d_years", "lookback_periods", "d_periods", "mrp_minus_sharpe"};
    else if (f.aggregate == "lookback") t.columns = {"label", "lookback_years", "lookback_periods", "mean_mrp_minus_sharpe"};
    else t.columns = {"label", "d_years", "d_periods", "mean_mrp_minus_sharpe"};

    for (const auto& series : all) {
        const auto grid = sensitivity_grid(series, lookbacks, ds, {o.splits, metric_of(o), o.jobs});
        auto cell = [&](const std::optional<double>& v) -> Cell { return v ? Cell{*v} : Cell{infeasible}; };
        if (f.aggregate == "none") {
            for (std::size_t a = 0; a < lookbacks.size(); ++a)
                for (std::size_t b = 0; b < ds.size(); ++b)
                    t.rows.push_back({series.label(), years_text(lookbacks[a], ppy), years_text(ds[b], ppy),
                                      static_cast<std::int64_t>(lookbacks[a]), static_cast<std::int64_t>(ds[b]),
                                      cell(grid.cells[a][b])});
        } else if (f.aggregate == "lookback") {
            const auto avg = average_over_ds(grid);
            for (std::size_t a = 0; a < lookbacks.size(); ++a)
                t.rows.push_back({series.label(), years_text(lookbacks[a], ppy), static_cast<std::int64_t>(lookbacks[a]), cell(avg[a])});
        } else {
            const auto avg = average_over_lookbacks(grid);
            for (std::size_t b = 0; b < ds.size(); ++b)
                t.rows.push_back({series.label(), years_text(ds[b], ppy), static_cast<std::int64_t>(ds[b]), cell(avg[b])});
        }
    }
    return t;
}

struct CorrelationFlags {
    std::string window;  // empty: frequency default
    bool per_factor = false;
};

inline Table run_correlations(const SharedOptions& o, const CorrelationFlags& f)
{
    const auto all = load_input(o);
    const std::size_t d = min_segment_periods(o);
    std::vector<RobustnessMetrics> rows(all.size());
    parallel_for(all.size(), o.jobs, [&](std::size_t k) {
        const ReturnSeries window = apply_lookback(all[k], o);
        const std::size_t rw = f.window.empty() ? default_rolling_window(window.frequency())
                                                : parse_horizon(f.window).periods(window.frequency());
        rows[k] = robustness_metrics(window, window.size(), d, o.splits, rw, metric_of(o));
    });
    Table t;
    const auto& names = robustness_metric_names();
    if (f.per_factor) {
        t.columns = {"label", names[0], names[1], names[2], names[3]};
        for (const auto& r : rows) t.rows.push_back({r.label, r.mrp, r.sharpe, r.rolling_sharpe_volatility, r.max_drawdown});
        return t;
    }
    const auto m = robustness_correlations(rows);
    t.columns = {"metric", names[0], names[1], names[2], names[3]};
    for (std::size_t a = 0; a < 4; ++a) t.rows.push_back({names[a], m[a][0], m[a][1], m[a][2], m[a][3]});
    return t;
}

inline Table run_portfolio(const SharedOptions& o, const std::vector<double>& weights_flag)
{
    const auto all = load_input(o);
    PortfolioSpec spec;
    spec.strategies = all;
    spec.weights = weights_flag.empty() ? std::vector<double>(all.size(), 1.0 / static_cast<double>(all.size())) : weights_flag;
    if (spec.weights.size() != all.size())
        throw UsageError("--weights has " + std::to_string(spec.weights.size()) + " entries for " +
                         std::to_string(all.size()) + " strategies");
    const ReturnSeries window = apply_lookback(aggregate_portfolio(spec), o);
    const auto r = mrp_fast(window, o.splits, min_segment_periods(o), {metric_of(o), o.jobs});
    Table t;
    t.columns = {"segment", "start_date", "end_date", "length", "metric", "is_min"};
    const auto& p = r.optimal_splits;
    for (std::size_t k = 0; k < p.segment_count(); ++k) {
        t.rows.push_back({static_cast<std::int64_t>(k), format_iso_date(window.date(p.segment_start(k))),
                          format_iso_date(window.date(p.segment_end(k) - 1)),
                          static_cast<std::int64_t>(p.segment_end(k) - p.segment_start(k)), r.segment_metrics[k],
                          k == r.argmin_segment});
    }
    return t;
}

struct BiasFlags {
    std::vector<std::uint64_t> N;
    std::uint64_t s = 1;
    std::uint64_t n_s = 0;
    std::size_t length = 0;
    double mu = 0.0;
    double sigma = 1.0;
    std::uint64_t trials = 100000;
};

inline Table run_bias(const SharedOptions& o, const BiasFlags& f)
{
    std::vector<BiasModel> models;
    for (auto n : f.N) models.push_back(BiasModel::flat(n, f.mu, f.sigma));
    if (f.n_s > 0) models.push_back(BiasModel{f.mu, f.sigma, f.s, f.n_s});
    if (f.length > 0) {
        const std::size_t d = parse_horizon(o.min_segment).periods(frequency_of(o));
        const auto count = count_valid_partitions(f.length, f.s, d);
        if (count == 0) throw Error(Errc::infeasible, "no valid partitions for that length and d");
        models.push_back(BiasModel{f.mu, f.sigma, f.s, count});
    }
    if (models.empty()) throw UsageError("bias needs --N, --n-s or --length");
    Table t;
    t.columns = {"N", "exact", "asymptotic", "simulated_mean", "se", "bias_exact", "bias_asymptotic"};
    for (const auto& m : models) {
        const auto sample = simulate_min_model(m, {f.trials, o.seed, o.jobs});
        const auto st = summarize(sample);
        const bool asym = m.N() >= 3;
        t.rows.push_back({static_cast<std::int64_t>(m.N()), expected_min_exact(m),
                          asym ? Cell{m.mu - bias_asymptotic(m)} : Cell{Missing{}}, st.mean, st.se, bias_exact(m),
                          asym ? Cell{bias_asymptotic(m)} : Cell{Missing{}}});
    }
    return t;
}

struct SimulateFlags {
    std::string mode = "evt";
    std::uint64_t N = 100000;
    std::uint64_t s = 1;
    double mu = 0.0;
    double sigma = 1.0;
    std::uint64_t trials = 10000;
    std::string block_len;  // empty: d
    std::size_t replicates = 1000;
};

inline Table run_simulate(const SharedOptions& o, const SimulateFlags& f)
{
    Table t;
    if (f.mode == "evt") {
        if (f.N % f.s != 0) throw UsageError("--N must be a multiple of --s");
        const BiasModel model{f.mu, f.sigma, f.s, f.N / f.s};
        const auto diag = gumbel_limit_diagnostic(model, {f.trials, o.seed, o.jobs});
        t.columns = {"N", "simulated_mean", "se", "exact", "ks", "gumbel_b", "gumbel_a"};
        for (const auto& row : diag.drift) {
            const bool last = row.N == model.N();
            t.rows.push_back({static_cast<std::int64_t>(row.N), row.simulated_mean, row.se, row.exact,
                              last ? Cell{diag.ks} : Cell{Missing{}}, last ? Cell{diag.constants.b} : Cell{Missing{}},
                              last ? Cell{diag.constants.a} : Cell{Missing{}}});
        }
        return t;
    }
    const auto all = load_input(o);
    const std::size_t d = min_segment_periods(o);
    t.columns = {"label", "original_mrp", "replicates", "failed", "mean", "sd", "min", "q05", "q25", "q50", "q75", "q95", "max"};
    for (const auto& s : all) {
        const ReturnSeries window = apply_lookback(s, o);
        BootstrapOptions bo;
        bo.block_len = f.block_len.empty() ? d : parse_horizon(f.block_len).periods(window.frequency());
        bo.replicates = f.replicates;
        bo.splits = o.splits;
        bo.d = d;
        bo.kind = metric_of(o);
        bo.seed = o.seed;
        bo.jobs = o.jobs;
        const auto b = block_bootstrap_mrp(window, bo);
        const double original = compute_mrp(window, o.splits, d, {bo.kind, o.jobs}).value;
        std::vector<Cell> row{window.label(), original, static_cast<std::int64_t>(b.values.size() + b.failed),
                              static_cast<std::int64_t>(b.failed), b.mean, b.sd, b.min};
        for (const auto& q : b.quantiles) row.push_back(q.second);
        row.push_back(b.max);
        t.rows.push_back(std::move(row));
    }
    return t;
}

struct FixtureFlags {
    FixtureSpec spec;
    std::string start = "1980-01-02";
};

inline void run_fixture(const SharedOptions& o, FixtureFlags f)
{
    if (o.out.empty()) throw UsageError("fixture needs --out");
    const auto start = parse_iso_date(f.start);
    if (!start) throw UsageError("bad --fixture-start '" + f.start + "'");
    f.spec.start_date = *start;
    f.spec.frequency = frequency_of(o);
    write_csv(std::filesystem::path(o.out), {make_fixture(o.seed, f.spec)});
}

// ---------------------------------------------------------------------------

/// Entry point shared by the binary and the tests. Exit codes: 0 success,
/// 1 data or compute error, 2 usage error.
inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr)
{
    CLI::App app{"Minimum regime performance analytics"};
    app.name("mrp");
    app.require_subcommand(1);
    app.set_config("--config", "", "Plain key=value configuration file");

    SharedOptions shared;
    SensitivityFlags sens;
    CorrelationFlags corr;
    std::vector<double> weights;
    BiasFlags bias;
    SimulateFlags sim;
    FixtureFlags fix;

    auto* report = app.add_subcommand("report", "Full-window Sharpe and MRP per strategy");
    auto* front = app.add_subcommand("frontier", "Sharpe vs MRP points with dominance flags");
    auto* sensitivity = app.add_subcommand("sensitivity", "MRP - Sharpe over lookback x minimum segment");
    auto* correlations = app.add_subcommand("correlations", "Correlations of MRP with other robustness metrics");
    auto* portfolio = app.add_subcommand("portfolio", "MRP of a weighted aggregate return");
    auto* bias_cmd = app.add_subcommand("bias", "Exact and asymptotic bias of the minimum under the i.i.d. normal model");
    auto* simulate = app.add_subcommand("simulate", "Gumbel-limit diagnostic (evt) or block bootstrap of MRP");
    auto* fixture = app.add_subcommand("fixture", "Write a synthetic two-regime return series");
    for (auto* sub : {report, front, sensitivity, correlations, portfolio, bias_cmd, simulate, fixture}) add_shared(*sub, shared);

    sensitivity->add_option("--lookbacks", sens.lookbacks, "Lookback grid, e.g. 10:40:10y")->capture_default_str();
    sensitivity->add_option("--ds", sens.ds, "Minimum-segment grid, e.g. 1:5:1y")->capture_default_str();
    sensitivity->add_option("--aggregate", sens.aggregate, "none | lookback | d")
        ->check(CLI::IsMember({"none", "lookback", "d"}))->capture_default_str();

    correlations->add_option("--window", corr.window, "Rolling Sharpe window (default 252p daily, 36p monthly)");
    correlations->add_flag("--per-factor", corr.per_factor, "Emit the per-strategy metrics instead of the matrix");

    portfolio->add_option("--weights", weights, "Comma-separated weights (default equal)")->delimiter(',');

    bias_cmd->add_option("--N", bias.N, "Order-statistic counts N = s * n_s")->delimiter(',');
    bias_cmd->add_option("--s-model", bias.s, "Splits s in the model")->capture_default_str();
    bias_cmd->add_option("--n-s", bias.n_s, "Valid split count n_s");
    bias_cmd->add_option("--length", bias.length, "Series length; n_s from the split-count law with --min-segment");
    bias_cmd->add_option("--mu", bias.mu)->capture_default_str();
    bias_cmd->add_option("--sigma", bias.sigma)->capture_default_str();
    bias_cmd->add_option("--trials", bias.trials, "Monte Carlo trials")->check(CLI::PositiveNumber)->capture_default_str();

    simulate->add_option("--mode", sim.mode, "evt | bootstrap")->check(CLI::IsMember({"evt", "bootstrap"}))->capture_default_str();
    simulate->add_option("--N", sim.N, "Order-statistic count for evt mode")->capture_default_str();
    simulate->add_option("--s-model", sim.s, "Group size s for evt mode")->check(CLI::PositiveNumber)->capture_default_str();
    simulate->add_option("--mu", sim.mu)->capture_default_str();
    simulate->add_option("--sigma", sim.sigma)->capture_default_str();
    simulate->add_option("--trials", sim.trials)->check(CLI::PositiveNumber)->capture_default_str();
    simulate->add_option("--block-len", sim.block_len, "Bootstrap block length (default: --min-segment)");
    simulate->add_option("--replicates", sim.replicates)->check(CLI::PositiveNumber)->capture_default_str();

    fixture->add_option("--length", fix.spec.length)->capture_default_str();
    fixture->add_option("--break", fix.spec.break_index)->capture_default_str();
    fixture->add_option("--drift-before", fix.spec.drift_before)->capture_default_str();
    fixture->add_option("--drift-after", fix.spec.drift_after)->capture_default_str();
    fixture->add_option("--vol-before", fix.spec.vol_before)->capture_default_str();
    fixture->add_option("--vol-after", fix.spec.vol_after)->capture_default_str();
    fixture->add_option("--fixture-start", fix.start, "First date of the fixture")->capture_default_str();
    fixture->add_option("--label", fix.spec.label)->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        std::ostringstream o_msg, e_msg;
        const int code = app.exit(e, o_msg, e_msg);
        out << o_msg.str();
        err << e_msg.str();
        return code == 0 ? 0 : 2;
    }

    try {
        if (report->parsed()) emit(run_report(shared), shared, out);
        else if (front->parsed()) emit(run_frontier(shared), shared, out);
        else if (sensitivity->parsed()) emit(run_sensitivity(shared, sens), shared, out);
        else if (correlations->parsed()) emit(run_correlations(shared, corr), shared, out);
        else if (portfolio->parsed()) emit(run_portfolio(shared, weights), shared, out);
        else if (bias_cmd->parsed()) emit(run_bias(shared, bias), shared, out);
        else if (simulate->parsed()) emit(run_simulate(shared, sim), shared, out);
        else if (fixture->parsed()) run_fixture(shared, fix);
    } catch (const UsageError& e) {
        err << "mrp: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "mrp: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

} // namespace mrp::cli
