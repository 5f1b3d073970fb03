#pragma once

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mrp/bias.hpp"
#include "mrp/engine.hpp"
#include "mrp/error.hpp"
#include "mrp/metrics.hpp"
#include "mrp/parallel.hpp"
#include "mrp/random.hpp"
#include "mrp/series.hpp"

namespace mrp {

// ---------------------------------------------------------------------------
// Per-strategy summary

struct FactorReport {
    std::string label;
    double full_sharpe = 0.0;
    double mrp1 = 0.0;
    double left_sr = 0.0;
    double right_sr = 0.0;
    Date split_date;
    std::size_t window_length = 0;
};

/// Full-window metric and one-split MRP on the trailing `lookback` periods.
inline FactorReport factor_report(const ReturnSeries& series, std::size_t lookback, std::size_t d,
                                  const MetricKind& kind = Sharpe{})
{
    if (lookback < 2 * d)
        throw Error(Errc::infeasible, "lookback of " + std::to_string(lookback) +
                                          " periods cannot hold two segments of " + std::to_string(d));
    const ReturnSeries window = series.tail(lookback);
    const auto lr = left_right_report(window, d, kind);
    FactorReport rep;
    rep.label = series.label();
    rep.full_sharpe = full_metric(window, kind);
    rep.mrp1 = lr.mrp.value;
    rep.left_sr = lr.left;
    rep.right_sr = lr.right;
    rep.split_date = lr.split_date;
    rep.window_length = window.size();
    return rep;
}

// ---------------------------------------------------------------------------
// Decay-risk frontier

struct FrontierPoint {
    std::string label;
    double x = 0.0;  ///< full-sample metric
    double y = 0.0;  ///< MRP
    bool dominated = false;
    std::vector<std::string> dominated_by;
};

/// A point is dominated iff some other point is strictly higher on both axes.
inline std::vector<FrontierPoint> frontier(const std::vector<FactorReport>& reports)
{
    if (reports.empty()) throw Error(Errc::invalid_argument, "frontier needs at least one report");
    std::vector<FrontierPoint> points;
    points.reserve(reports.size());
    for (const auto& r : reports) points.push_back({r.label, r.full_sharpe, r.mrp1, false, {}});
    for (auto& p : points) {
        for (const auto& q : points) {
            if (q.x > p.x && q.y > p.y) {
                p.dominated = true;
                p.dominated_by.push_back(q.label);
            }
        }
    }
    return points;
}

// ---------------------------------------------------------------------------
// Sensitivity grid

/// (MRP - full-window metric) over lookback x minimum-segment pairs, both in
/// periods. Empty cells are infeasible: the lookback exceeds the data, cannot
/// hold s + 1 segments of length d, or has no scorable partition.
struct SensitivityGrid {
    std::string label;
    int periods_per_year = 252;
    std::vector<std::size_t> lookbacks;
    std::vector<std::size_t> ds;
    std::vector<std::vector<std::optional<double>>> cells;  // [lookback][d]

    std::size_t feasible_count() const
    {
        std::size_t c = 0;
        for (const auto& row : cells)
            for (const auto& v : row) c += v.has_value();
        return c;
    }
};

struct GridOptions {
    std::size_t splits = 1;
    MetricKind kind = Sharpe{};
    unsigned jobs = 1;
};

inline std::optional<double> sensitivity_cell(const ReturnSeries& series, std::size_t lookback, std::size_t d,
                                              const GridOptions& options)
{
    if (lookback > series.size() || d < min_metric_length(options.kind) ||
        lookback < (options.splits + 1) * d)
        return std::nullopt;
    const ReturnSeries window = series.tail(lookback);
    try {
        const double full = full_metric(window, options.kind);
        const auto r = compute_mrp(window, options.splits, d, {options.kind, 1});
        return r.value - full;
    } catch (const Error& e) {
        if (e.code() == Errc::no_valid_partition || e.code() == Errc::zero_variance) return std::nullopt;
        throw;
    }
}

inline SensitivityGrid sensitivity_grid(const ReturnSeries& series, const std::vector<std::size_t>& lookbacks,
                                        const std::vector<std::size_t>& ds, const GridOptions& options = {})
{
    if (lookbacks.empty() || ds.empty()) throw Error(Errc::invalid_argument, "empty sensitivity axes");
    SensitivityGrid grid;
    grid.label = series.label();
    grid.periods_per_year = series.periods_per_year();
    grid.lookbacks = lookbacks;
    grid.ds = ds;
    grid.cells.assign(lookbacks.size(), std::vector<std::optional<double>>(ds.size()));
    const std::size_t cols = ds.size();
    parallel_for(lookbacks.size() * cols, options.jobs, [&](std::size_t k) {
        grid.cells[k / cols][k % cols] = sensitivity_cell(series, lookbacks[k / cols], ds[k % cols], options);
    });
    return grid;
}

namespace detail {

inline std::optional<double> mean_of(const std::vector<std::optional<double>>& values)
{
    double sum = 0.0;
    std::size_t count = 0;
    for (const auto& v : values)
        if (v) {
            sum += *v;
            ++count;
        }
    if (count == 0) return std::nullopt;
    return sum / static_cast<double>(count);
}

} // namespace detail

/// Mean over the d axis for each lookback (feasible cells only).
inline std::vector<std::optional<double>> average_over_ds(const SensitivityGrid& grid)
{
    std::vector<std::optional<double>> out;
    for (const auto& row : grid.cells) out.push_back(detail::mean_of(row));
    return out;
}

/// Mean over the lookback axis for each d (feasible cells only).
inline std::vector<std::optional<double>> average_over_lookbacks(const SensitivityGrid& grid)
{
    std::vector<std::optional<double>> out;
    for (std::size_t c = 0; c < grid.ds.size(); ++c) {
        std::vector<std::optional<double>> column;
        for (const auto& row : grid.cells) column.push_back(row[c]);
        out.push_back(detail::mean_of(column));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Cross-sectional robustness correlations

struct RobustnessMetrics {
    std::string label;
    double mrp = 0.0;
    double sharpe = 0.0;
    double rolling_sharpe_volatility = 0.0;
    double max_drawdown = 0.0;
};

inline const std::array<std::string, 4>& robustness_metric_names()
{
    static const std::array<std::string, 4> names{"mrp", "sharpe", "rolling_sharpe_vol", "max_drawdown"};
    return names;
}

inline RobustnessMetrics robustness_metrics(const ReturnSeries& series, std::size_t lookback, std::size_t d,
                                            std::size_t splits, std::size_t rolling_window,
                                            const MetricKind& kind = Sharpe{})
{
    const ReturnSeries window = series.tail(lookback);
    RobustnessMetrics m;
    m.label = series.label();
    m.mrp = compute_mrp(window, splits, d, {kind, 1}).value;
    m.sharpe = full_metric(window, kind);
    m.rolling_sharpe_volatility = rolling_sharpe_volatility(window, rolling_window).value;
    m.max_drawdown = max_drawdown(window);
    return m;
}

/// Pearson correlation of two equal-length vectors.
inline double pearson(const std::vector<double>& x, const std::vector<double>& y)
{
    if (x.size() != y.size() || x.size() < 2)
        throw Error(Errc::invalid_argument, "pearson needs equal-length vectors of size >= 2");
    const double n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (!(sxx > 0.0) || !(syy > 0.0)) throw Error(Errc::degenerate_vector, "vector has zero variance");
    return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

/// Symmetric correlation matrix with unit diagonal.
inline std::vector<std::vector<double>> correlation_matrix(const std::vector<std::vector<double>>& vectors)
{
    const std::size_t k = vectors.size();
    std::vector<std::vector<double>> out(k, std::vector<double>(k, 1.0));
    for (std::size_t a = 0; a < k; ++a) {
        const auto [lo, hi] = std::minmax_element(vectors[a].begin(), vectors[a].end());
        if (lo == vectors[a].end() || *lo == *hi)
            throw Error(Errc::degenerate_vector, "correlation input " + std::to_string(a) + " is constant");
        for (std::size_t b = a + 1; b < k; ++b) out[a][b] = out[b][a] = pearson(vectors[a], vectors[b]);
    }
    return out;
}

/// 4x4 Pearson matrix over (MRP, Sharpe, rolling Sharpe volatility, max drawdown)
/// across strategies, in robustness_metric_names() order.
inline std::vector<std::vector<double>> robustness_correlations(const std::vector<RobustnessMetrics>& rows)
{
    if (rows.size() < 3) throw Error(Errc::invalid_argument, "correlations need at least 3 strategies");
    std::vector<std::vector<double>> columns(4);
    for (const auto& r : rows) {
        columns[0].push_back(r.mrp);
        columns[1].push_back(r.sharpe);
        columns[2].push_back(r.rolling_sharpe_volatility);
        columns[3].push_back(r.max_drawdown);
    }
    return correlation_matrix(columns);
}

// ---------------------------------------------------------------------------
// Portfolio

struct PortfolioSpec {
    std::vector<double> weights;
    std::vector<ReturnSeries> strategies;
};

/// w'X_t on the dates common to every strategy (inner join).
inline ReturnSeries aggregate_portfolio(const PortfolioSpec& spec, std::string label = "portfolio")
{
    using std::chrono::sys_days;
    if (spec.strategies.empty() || spec.weights.size() != spec.strategies.size())
        throw Error(Errc::invalid_argument, "need one weight per strategy");
    if (std::none_of(spec.weights.begin(), spec.weights.end(), [](double w) { return w != 0.0; }))
        throw Error(Errc::invalid_argument, "all weights are zero");
    for (double w : spec.weights)
        if (!std::isfinite(w)) throw Error(Errc::invalid_argument, "non-finite weight");
    const Frequency freq = spec.strategies.front().frequency();
    for (const auto& s : spec.strategies)
        if (s.frequency() != freq) throw Error(Errc::date_mismatch, "strategies differ in frequency");

    const std::size_t k = spec.strategies.size();
    std::vector<std::size_t> pos(k, 0);
    std::vector<Date> dates;
    std::vector<double> agg;
    for (;;) {
        bool exhausted = false;
        sys_days latest{};
        for (std::size_t q = 0; q < k; ++q) {
            if (pos[q] >= spec.strategies[q].size()) {
                exhausted = true;
                break;
            }
            latest = std::max(latest, sys_days{spec.strategies[q].date(pos[q])});
        }
        if (exhausted) break;
        bool aligned = true;
        for (std::size_t q = 0; q < k; ++q) {
            while (pos[q] < spec.strategies[q].size() && sys_days{spec.strategies[q].date(pos[q])} < latest)
                ++pos[q];
            if (pos[q] >= spec.strategies[q].size() || sys_days{spec.strategies[q].date(pos[q])} != latest)
                aligned = false;
        }
        if (!aligned) continue;
        double r = 0.0;
        for (std::size_t q = 0; q < k; ++q) r += spec.weights[q] * spec.strategies[q][pos[q]++];
        dates.push_back(Date{latest});
        agg.push_back(r);
    }
    if (dates.empty()) throw Error(Errc::date_mismatch, "strategies share no dates");
    return ReturnSeries(std::move(label), freq, std::move(dates), std::move(agg));
}

inline MrpResult portfolio_mrp(const PortfolioSpec& spec, std::size_t s, std::size_t d, const MrpOptions& options = {})
{
    return mrp_fast(aggregate_portfolio(spec), s, d, options);
}

// ---------------------------------------------------------------------------
// Circular block bootstrap

struct BootstrapOptions {
    std::size_t block_len = 0;
    std::size_t replicates = 1000;
    std::size_t splits = 1;
    std::size_t d = 2;
    MetricKind kind = Sharpe{};
    std::uint64_t seed = 1;
    unsigned jobs = 1;
};

struct BootstrapSummary {
    std::vector<double> values;  ///< MRP per successful replicate, replicate order
    std::size_t failed = 0;      ///< replicates with no scorable partition
    double mean = 0.0;
    double sd = 0.0;
    double min = 0.0;
    double max = 0.0;
    std::vector<std::pair<double, double>> quantiles;  ///< (probability, value)
};

/// Linear-interpolation sample quantile of sorted data.
inline double sorted_quantile(const std::vector<double>& sorted, double p)
{
    if (sorted.empty()) throw Error(Errc::invalid_argument, "quantile of empty sample");
    const double h = p * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

/// One circular-block resample: blocks of block_len consecutive returns
/// (wrapping at the end) from uniform random starts, cut to the original
/// length. Dates are those of the original series.
inline ReturnSeries circular_block_resample(const ReturnSeries& series, std::size_t block_len, CounterRng& rng)
{
    const std::size_t n = series.size();
    std::vector<double> out;
    out.reserve(n);
    while (out.size() < n) {
        const auto start = static_cast<std::size_t>(rng() % n);
        for (std::size_t k = 0; k < block_len && out.size() < n; ++k) out.push_back(series[(start + k) % n]);
    }
    return ReturnSeries(series.label(), series.frequency(),
                        std::vector<Date>(series.dates().begin(), series.dates().end()), std::move(out));
}

inline BootstrapSummary block_bootstrap_mrp(const ReturnSeries& series, const BootstrapOptions& options)
{
    if (options.block_len < 1 || options.block_len > series.size())
        throw Error(Errc::invalid_block, "block length " + std::to_string(options.block_len) +
                                             " outside [1, " + std::to_string(series.size()) + "]");
    if (options.replicates < 1) throw Error(Errc::invalid_argument, "replicates must be at least 1");
    detail::check_mrp_args(series.size(), options.splits, options.d, options.kind);

    std::vector<std::optional<double>> per_rep(options.replicates);
    parallel_for(options.replicates, options.jobs, [&](std::size_t r) {
        CounterRng rng(options.seed, r);
        const auto resampled = circular_block_resample(series, options.block_len, rng);
        try {
            per_rep[r] = compute_mrp(resampled, options.splits, options.d, {options.kind, 1}).value;
        } catch (const Error& e) {
            if (e.code() != Errc::no_valid_partition) throw;
        }
    });

    BootstrapSummary out;
    for (const auto& v : per_rep) {
        if (v) out.values.push_back(*v);
        else ++out.failed;
    }
    if (out.values.empty()) throw Error(Errc::no_valid_partition, "no bootstrap replicate had a valid partition");
    const auto st = summarize(out.values);
    out.mean = st.mean;
    out.sd = st.sd;
    std::vector<double> sorted = out.values;
    std::sort(sorted.begin(), sorted.end());
    out.min = sorted.front();
    out.max = sorted.back();
    for (double p : {0.05, 0.25, 0.5, 0.75, 0.95}) out.quantiles.emplace_back(p, sorted_quantile(sorted, p));
    return out;
}

} // namespace mrp
