#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include "mrp/error.hpp"
#include "mrp/series.hpp"

namespace mrp {

// ---------------------------------------------------------------------------
// Metric selection

struct Sharpe {};

/// Downside-risk variant. `mar` is the minimum acceptable return per period.
struct Sortino {
    double mar = 0.0;
};

/// Sharpe of active returns; the caller supplies strategy minus benchmark
/// (see active_returns).
struct InformationRatio {};

using MetricKind = std::variant<Sharpe, Sortino, InformationRatio>;

inline std::string metric_name(const MetricKind& kind)
{
    return std::visit(
        [](const auto& k) -> std::string {
            using K = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<K, Sharpe>) return "sharpe";
            else if constexpr (std::is_same_v<K, Sortino>) return "sortino";
            else return "information_ratio";
        },
        kind);
}

inline bool is_sortino(const MetricKind& kind) noexcept
{
    return std::holds_alternative<Sortino>(kind);
}

/// Smallest segment length on which the metric is defined.
inline std::size_t min_metric_length(const MetricKind& kind) noexcept
{
    return is_sortino(kind) ? 1 : 2;
}

// ---------------------------------------------------------------------------

/// Mean and dispersion of one half-open segment [start, end_exclusive).
/// stdev is empty for a single observation; sharpe_annualized is empty when
/// stdev is empty or numerically zero.
struct SegmentStats {
    std::size_t start = 0;
    std::size_t end_exclusive = 0;
    std::size_t n = 0;
    double mean = 0.0;
    std::optional<double> stdev;
    std::optional<double> sharpe_annualized;
};

namespace detail {

/// Relative floor on the centred sum of squares below which a segment counts
/// as having no dispersion. Rounding in the prefix differences is ~1e-16
/// relative, so anything under this is indistinguishable from a constant run.
inline constexpr double zero_dispersion_ratio = 1e-12;

inline void check_bounds(std::size_t start, std::size_t end, std::size_t n)
{
    if (start >= end || end > n)
        throw Error(Errc::invalid_argument, "segment [" + std::to_string(start) + ", " +
                                                std::to_string(end) + ") outside series of length " +
                                                std::to_string(n));
}

} // namespace detail

/// Cumulative sums of returns and squared returns, centred on the full-series
/// mean to limit cancellation. Any segment's mean and sample standard deviation
/// follow in O(1). When built for a Sortino metric it also carries cumulative
/// squared shortfalls below that metric's MAR.
///
/// Immutable after construction.
class PrefixTable {
public:
    explicit PrefixTable(const ReturnSeries& series, const MetricKind& kind = Sharpe{})
        : PrefixTable(series.returns(), series.periods_per_year(), kind)
    {
    }

    PrefixTable(std::span<const double> returns, int periods_per_year,
                const MetricKind& kind = Sharpe{})
        : returns_(returns.begin(), returns.end()), periods_per_year_(periods_per_year)
    {
        if (returns_.empty()) throw Error(Errc::empty_series, "cannot build prefix sums");
        if (periods_per_year_ <= 0)
            throw Error(Errc::invalid_argument, "periods_per_year must be positive");

        double total = 0.0;
        for (double x : returns_) total += x;
        shift_ = total / static_cast<double>(returns_.size());

        const std::size_t n = returns_.size();
        sum_.assign(n + 1, 0.0);
        sum_sq_.assign(n + 1, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            const double c = returns_[i] - shift_;
            sum_[i + 1] = sum_[i] + c;
            sum_sq_[i + 1] = sum_sq_[i] + c * c;
        }
        if (const auto* sortino = std::get_if<Sortino>(&kind)) {
            mar_ = sortino->mar;
            downside_sq_.assign(n + 1, 0.0);
            for (std::size_t i = 0; i < n; ++i) {
                const double shortfall = std::min(0.0, returns_[i] - sortino->mar);
                downside_sq_[i + 1] = downside_sq_[i] + shortfall * shortfall;
            }
        }
    }

    std::size_t size() const noexcept { return returns_.size(); }
    int periods_per_year() const noexcept { return periods_per_year_; }
    double annualization() const noexcept { return std::sqrt(static_cast<double>(periods_per_year_)); }
    std::span<const double> returns() const noexcept { return returns_; }

    /// Sum of the first k returns.
    double cumulative_sum(std::size_t k) const { return sum_.at(k) + shift_ * static_cast<double>(k); }

    /// Sum of the first k squared returns.
    double cumulative_sum_sq(std::size_t k) const
    {
        const double kk = static_cast<double>(k);
        return sum_sq_.at(k) + 2.0 * shift_ * sum_.at(k) + shift_ * shift_ * kk;
    }

    double mean(std::size_t start, std::size_t end) const { return moments(start, end).mean; }

    /// Sample variance (n - 1 denominator); empty for n < 2 or no dispersion.
    std::optional<double> variance(std::size_t start, std::size_t end) const
    {
        return moments(start, end).variance;
    }

    struct Moments {
        double mean = 0.0;
        std::optional<double> variance;
    };

    /// Mean and sample variance of [start, end). Prefix differences lose
    /// precision when the segment is short and nearly constant relative to
    /// the accumulated sums; if the estimated rounding error could move the
    /// annualized Sharpe by more than ~1e-12 the segment is rescanned directly.
    Moments moments(std::size_t start, std::size_t end) const
    {
        const std::size_t count = end - start;
        const double n = static_cast<double>(count);
        const double s = sum_[end] - sum_[start];
        Moments m{shift_ + s / n, std::nullopt};
        if (count < 2) return m;
        const double sq = sum_sq_[end] - sum_sq_[start];
        const double centred = sq - s * s / n;
        if (centred > detail::zero_dispersion_ratio * sq) {
            constexpr double eps = std::numeric_limits<double>::epsilon();
            // |sum of centred values| <= sqrt(k * sum of squares)
            const double err_s = 4.0 * eps *
                                 (std::sqrt(static_cast<double>(end) * sum_sq_[end]) +
                                  std::sqrt(static_cast<double>(start) * sum_sq_[start]));
            const double err_sq = 4.0 * eps * (sum_sq_[end] + sum_sq_[start]) + 2.0 * std::abs(s) * err_s / n;
            const double var = centred / (n - 1.0);
            const double sd = std::sqrt(var);
            const double err_sharpe =
                (std::abs(m.mean) / sd * 0.5 * err_sq / centred + err_s / n / sd) * annualization();
            if (err_sharpe <= 1e-12) {
                m.variance = var;
                return m;
            }
        } else if (!(sq > 0.0)) {
            return m;
        }
        return direct_moments(start, end);
    }
    SegmentStats stats(std::size_t start, std::size_t end) const
    {
        detail::check_bounds(start, end, size());
        SegmentStats st;
        st.start = start;
        st.end_exclusive = end;
        st.n = end - start;
        const auto mo = moments(start, end);
        st.mean = mo.mean;
        if (st.n >= 2) {
            const auto& var = mo.variance;
            st.stdev = var ? std::sqrt(*var) : 0.0;
            if (var) st.sharpe_annualized = st.mean / *st.stdev * annualization();
        }
        return st;
    }

    /// Annualized Sharpe, or empty when undefined (short or zero-dispersion segment).
    std::optional<double> sharpe(std::size_t start, std::size_t end) const
    {
        const auto mo = moments(start, end);
        if (!mo.variance) return std::nullopt;
        return mo.mean / std::sqrt(*mo.variance) * annualization();
    }

    bool has_downside() const noexcept { return !downside_sq_.empty(); }
    double downside_mar() const noexcept { return mar_; }

    /// Annualized Sortino from the downside prefix; requires a table built
    /// for Sortino with the same MAR.
    std::optional<double> sortino(std::size_t start, std::size_t end) const
    {
        const double n = static_cast<double>(end - start);
        const double dsq = downside_sq_[end] - downside_sq_[start];
        if (!(dsq > 0.0)) return std::nullopt;
        return (mean(start, end) - mar_) / std::sqrt(dsq / n) * annualization();
    }

private:
    Moments direct_moments(std::size_t start, std::size_t end) const
    {
        const double n = static_cast<double>(end - start);
        double total = 0.0;
        for (std::size_t i = start; i < end; ++i) total += returns_[i];
        Moments m{total / n, std::nullopt};
        double ss = 0.0, raw = 0.0;
        for (std::size_t i = start; i < end; ++i) {
            const double c = returns_[i] - m.mean;
            const double g = returns_[i] - shift_;
            ss += c * c;
            raw += g * g;
        }
        if (ss > detail::zero_dispersion_ratio * raw) m.variance = ss / (n - 1.0);
        return m;
    }

    std::vector<double> returns_;
    int periods_per_year_;
    double shift_ = 0.0;
    std::vector<double> sum_;
    std::vector<double> sum_sq_;
    std::vector<double> downside_sq_;
    double mar_ = 0.0;
};

/// Sortino by a direct pass over the segment: mean excess over MAR divided by
/// the root-mean-square shortfall below MAR, annualized.
inline std::optional<double> sortino_direct(std::span<const double> segment, double mar,
                                            int periods_per_year)
{
    if (segment.empty()) return std::nullopt;
    double sum = 0.0, dsq = 0.0;
    for (double x : segment) {
        sum += x;
        const double shortfall = std::min(0.0, x - mar);
        dsq += shortfall * shortfall;
    }
    if (!(dsq > 0.0)) return std::nullopt;
    const double n = static_cast<double>(segment.size());
    return (sum / n - mar) / std::sqrt(dsq / n) * std::sqrt(static_cast<double>(periods_per_year));
}

/// Annualized metric of segment [start, end_exclusive).
///
/// Sharpe and information ratio come from the prefix table; Sortino is a
/// direct pass over the segment. Throws SegmentTooShort below the metric's
/// minimum length and ZeroVariance when the denominator vanishes.
inline double segment_metric(const PrefixTable& table, std::size_t start, std::size_t end_exclusive,
                             const MetricKind& kind)
{
    detail::check_bounds(start, end_exclusive, table.size());
    const std::size_t n = end_exclusive - start;
    if (n < min_metric_length(kind))
        throw Error(Errc::segment_too_short,
                    "segment of length " + std::to_string(n) + " too short for " + metric_name(kind));
    std::optional<double> value;
    if (const auto* s = std::get_if<Sortino>(&kind)) {
        value = sortino_direct(table.returns().subspan(start, n), s->mar, table.periods_per_year());
    } else {
        value = table.sharpe(start, end_exclusive);
    }
    if (!value)
        throw Error(Errc::zero_variance, "segment [" + std::to_string(start) + ", " +
                                             std::to_string(end_exclusive) + ") has no dispersion");
    return *value;
}

/// Metric over a whole series.
inline double full_metric(const ReturnSeries& series, const MetricKind& kind = Sharpe{})
{
    const PrefixTable table(series, kind);
    return segment_metric(table, 0, table.size(), kind);
}

// ---------------------------------------------------------------------------
// Path metrics

/// Largest peak-to-trough loss of the compounded wealth path, starting from
/// wealth 1 before the first return. Result in [0, 1).
inline double max_drawdown(const ReturnSeries& series)
{
    if (series.empty()) throw Error(Errc::empty_series, "max_drawdown of empty series");
    double wealth = 1.0, peak = 1.0, worst = 1.0;
    for (std::size_t i = 0; i < series.size(); ++i) {
        if (series[i] <= -1.0)
            throw Error(Errc::wealth_non_positive,
                        "return <= -100% at " + format_iso_date(series.date(i)));
        wealth *= 1.0 + series[i];
        peak = std::max(peak, wealth);
        worst = std::min(worst, wealth / peak);
    }
    return 1.0 - worst;
}

struct RollingSharpeVolatility {
    double value = 0.0;
    std::size_t windows = 0;  ///< windows that contributed a Sharpe value
    std::size_t skipped = 0;  ///< windows dropped for zero dispersion
};

/// Sample standard deviation of the annualized Sharpe over every contiguous
/// window of `window` periods. Zero-dispersion windows are skipped and counted.
inline RollingSharpeVolatility rolling_sharpe_volatility(const ReturnSeries& series, std::size_t window)
{
    if (window < 2) throw Error(Errc::invalid_argument, "rolling window must be at least 2");
    if (series.size() < window + 1)
        throw Error(Errc::series_too_short, "series of length " + std::to_string(series.size()) +
                                                " needs at least " + std::to_string(window + 1) +
                                                " observations for window " + std::to_string(window));
    const PrefixTable table(series);
    RollingSharpeVolatility out;
    std::vector<double> sharpes;
    sharpes.reserve(series.size() - window + 1);
    for (std::size_t i = 0; i + window <= series.size(); ++i) {
        if (auto s = table.sharpe(i, i + window)) sharpes.push_back(*s);
        else ++out.skipped;
    }
    out.windows = sharpes.size();
    if (sharpes.size() < 2)
        throw Error(Errc::series_too_short, "fewer than two windows with non-zero dispersion");
    double mean = 0.0;
    for (double s : sharpes) mean += s;
    mean /= static_cast<double>(sharpes.size());
    double ss = 0.0;
    for (double s : sharpes) ss += (s - mean) * (s - mean);
    out.value = std::sqrt(ss / static_cast<double>(sharpes.size() - 1));
    return out;
}

/// Default rolling window: one year of daily data, three years of monthly.
constexpr std::size_t default_rolling_window(Frequency f) noexcept
{
    return f == Frequency::daily ? 252 : 36;
}

} // namespace mrp
