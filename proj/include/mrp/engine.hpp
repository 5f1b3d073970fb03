#pragma once

#include <algorithm>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "mrp/error.hpp"
#include "mrp/metrics.hpp"
#include "mrp/parallel.hpp"
#include "mrp/partition.hpp"
#include "mrp/series.hpp"

namespace mrp {

struct MrpOptions {
    MetricKind kind = Sharpe{};
    unsigned jobs = 1;
};

/// Worst segment metric of the worst valid partition.
///
/// value equals segment_metrics[argmin_segment], the smallest entry (lowest
/// index on ties). split_dates[k] is the date of the last observation before
/// split k.
struct MrpResult {
    double value = 0.0;
    PartitionSpec optimal_splits;
    std::vector<double> segment_metrics;
    std::size_t argmin_segment = 0;
    std::vector<Date> split_dates;
};

/// Segment metric of one series under a fixed metric kind. Returns empty for
/// segments where the metric is undefined so the search can treat them as
/// infeasible without throwing.
class SegmentScorer {
public:
    SegmentScorer(const ReturnSeries& series, const MetricKind& kind)
        : table_(series, kind), sortino_(is_sortino(kind))
    {
    }

    std::optional<double> operator()(std::size_t start, std::size_t end) const
    {
        return sortino_ ? table_.sortino(start, end) : table_.sharpe(start, end);
    }

    std::size_t size() const noexcept { return table_.size(); }

private:
    PrefixTable table_;
    bool sortino_;
};

namespace detail {

inline void check_mrp_args(std::size_t n, std::size_t s, std::size_t d, const MetricKind& kind)
{
    if (s < 1) throw Error(Errc::invalid_argument, "split count must be at least 1");
    if (d < min_metric_length(kind))
        throw Error(Errc::invalid_argument, "minimum segment length " + std::to_string(d) +
                                                " too short for " + metric_name(kind));
    if (n < (s + 1) * d)
        throw Error(Errc::infeasible, "series of length " + std::to_string(n) + " cannot hold " +
                                          std::to_string(s + 1) + " segments of length " +
                                          std::to_string(d));
}

inline MrpResult make_result(const ReturnSeries& series, const SegmentScorer& score,
                             std::vector<std::size_t> splits, std::size_t d)
{
    MrpResult r;
    r.optimal_splits.splits = std::move(splits);
    r.optimal_splits.n = series.size();
    r.optimal_splits.d = d;
    const auto& p = r.optimal_splits;
    r.segment_metrics.reserve(p.segment_count());
    for (std::size_t k = 0; k < p.segment_count(); ++k) {
        const auto v = score(p.segment_start(k), p.segment_end(k));
        if (!v) throw Error(Errc::no_valid_partition, "completed partition has a degenerate segment");
        r.segment_metrics.push_back(*v);
    }
    const auto it = std::min_element(r.segment_metrics.begin(), r.segment_metrics.end());
    r.argmin_segment = static_cast<std::size_t>(it - r.segment_metrics.begin());
    r.value = *it;
    for (std::size_t t : p.splits) r.split_dates.push_back(series.date(t - 1));
    return r;
}

[[noreturn]] inline void throw_no_valid_partition()
{
    throw Error(Errc::no_valid_partition, "every valid partition contains a zero-dispersion segment");
}

} // namespace detail

/// Exhaustive search over enumerate_partitions. Exponential in s; this is the
/// reference the faster searches are checked against. Ties go to the earliest
/// split set in lexicographic order.
inline MrpResult mrp_brute_force(const ReturnSeries& series, std::size_t s, std::size_t d,
                                 const MetricKind& kind = Sharpe{})
{
    detail::check_mrp_args(series.size(), s, d, kind);
    const SegmentScorer score(series, kind);
    double best = std::numeric_limits<double>::infinity();
    std::optional<std::vector<std::size_t>> best_splits;
    for (const PartitionSpec& p : enumerate_partitions(series.size(), s, d)) {
        double worst = std::numeric_limits<double>::infinity();
        bool ok = true;
        for (std::size_t k = 0; k < p.segment_count() && ok; ++k) {
            const auto v = score(p.segment_start(k), p.segment_end(k));
            if (!v) ok = false;
            else worst = std::min(worst, *v);
        }
        if (ok && worst < best) {
            best = worst;
            best_splits = p.splits;
        }
    }
    if (!best_splits) detail::throw_no_valid_partition();
    return detail::make_result(series, score, std::move(*best_splits), d);
}

/// MRP with a single split: scans t in [d, n - d] with O(1) work per split.
inline MrpResult mrp_one_split(const ReturnSeries& series, std::size_t d,
                               const MetricKind& kind = Sharpe{})
{
    const std::size_t n = series.size();
    detail::check_mrp_args(n, 1, d, kind);
    const SegmentScorer score(series, kind);
    double best = std::numeric_limits<double>::infinity();
    std::size_t best_t = 0;
    for (std::size_t t = d; t + d <= n; ++t) {
        const auto left = score(0, t);
        const auto right = score(t, n);
        if (!left || !right) continue;
        const double m = std::min(*left, *right);
        if (m < best) {
            best = m;
            best_t = t;
        }
    }
    if (best_t == 0) detail::throw_no_valid_partition();
    return detail::make_result(series, score, {best_t}, d);
}

/// MRP_s in O(n^2) window evaluations.
///
/// A window [i, j) is a segment of some valid partition iff it is at least d
/// long and the prefix [0, i) and suffix [j, n) can hold k and s - k further
/// segments. MRP_s is the smallest metric over such windows. The minimizing
/// window (ties: smallest i, then smallest j) is completed greedily: prefix
/// and suffix segments of length d, with the last segment of each side taking
/// the remainder.
///
/// If any candidate window has zero dispersion, feasibility and completion
/// switch to an exact dynamic program over partitions that avoid such
/// segments.
inline MrpResult mrp_fast(const ReturnSeries& series, std::size_t s, std::size_t d,
                          const MrpOptions& options = {})
{
    const std::size_t n = series.size();
    detail::check_mrp_args(n, s, d, options.kind);
    const SegmentScorer score(series, options.kind);

    // Candidate ends for windows starting at i, assuming every segment is scorable:
    // j in [i + d, inner_end] plus j == n when the prefix can hold all s splits.
    struct Row {
        std::size_t inner_end = 0;  // 0 = none
        bool to_end = false;
    };
    auto row = [&](std::size_t i) {
        Row r;
        if (i == 0) {
            r.inner_end = n - s * d;
            return r;
        }
        const std::size_t kmax = std::min(s, i / d);
        if (kmax == 0) return r;
        r.to_end = kmax == s;
        const std::size_t k_inner = std::min(kmax, s - 1);
        if (k_inner >= 1) r.inner_end = n - (s - k_inner) * d;
        return r;
    };

    struct Best {
        double value = std::numeric_limits<double>::infinity();
        std::size_t i = 0, j = 0;
        bool found = false;
        bool degenerate = false;
        void offer(double v, std::size_t a, std::size_t b)
        {
            if (!found || std::tie(v, a, b) < std::tie(value, i, j)) {
                value = v;
                i = a;
                j = b;
                found = true;
            }
        }
    };
    auto merge = [](Best& acc, const Best& other) {
        if (other.found) acc.offer(other.value, other.i, other.j);
        acc.degenerate = acc.degenerate || other.degenerate;
    };

    const std::size_t rows = n - d + 1;
    std::vector<Best> per_row(rows);
    parallel_for(rows, options.jobs, [&](std::size_t i) {
        Best& b = per_row[i];
        const Row r = row(i);
        auto visit = [&](std::size_t j) {
            if (auto v = score(i, j)) b.offer(*v, i, j);
            else b.degenerate = true;
        };
        for (std::size_t j = i + d; j <= r.inner_end; ++j) visit(j);
        if (r.to_end && (r.inner_end < n)) visit(n);
    });
    Best best;
    for (const Best& b : per_row) merge(best, b);

    if (!best.degenerate) {
        if (!best.found) detail::throw_no_valid_partition();
        const std::size_t i = best.i, j = best.j;
        std::size_t k = 0;
        for (;; ++k) {
            const bool prefix_ok = k == 0 ? i == 0 : (i > 0 && i >= k * d);
            const std::size_t m = s - k;
            const bool suffix_ok = m == 0 ? j == n : n - j >= m * d;
            if (prefix_ok && suffix_ok) break;
        }
        std::vector<std::size_t> splits;
        for (std::size_t q = 1; q < k; ++q) splits.push_back(q * d);
        if (k >= 1) splits.push_back(i);
        const std::size_t m = s - k;
        for (std::size_t q = 0; q < m; ++q) splits.push_back(j + q * d);
        return detail::make_result(series, score, std::move(splits), d);
    }

    // Exact feasibility avoiding zero-dispersion segments.
    // prefix[k][i]: [0, i) splits into k scorable segments of length >= d.
    // suffix[m][j]: [j, n) splits into m scorable segments of length >= d.
    auto ok = [&](std::size_t a, std::size_t b) { return b - a >= d && score(a, b).has_value(); };
    std::vector<std::vector<char>> prefix(s + 1, std::vector<char>(n + 1, 0));
    std::vector<std::vector<char>> suffix(s + 1, std::vector<char>(n + 1, 0));
    prefix[0][0] = 1;
    suffix[0][n] = 1;
    for (std::size_t k = 1; k <= s; ++k) {
        parallel_for(n + 1, options.jobs, [&](std::size_t i) {
            for (std::size_t a = 0; a + d <= i && !prefix[k][i]; ++a)
                if (prefix[k - 1][a] && ok(a, i)) prefix[k][i] = 1;
        });
        parallel_for(n + 1, options.jobs, [&](std::size_t j) {
            for (std::size_t b = j + d; b <= n && !suffix[k][j]; ++b)
                if (suffix[k - 1][b] && ok(j, b)) suffix[k][j] = 1;
        });
    }
    auto split_k = [&](std::size_t i, std::size_t j) -> std::optional<std::size_t> {
        for (std::size_t k = 0; k <= s; ++k)
            if (prefix[k][i] && suffix[s - k][j]) return k;
        return std::nullopt;
    };

    std::vector<Best> exact_rows(rows);
    parallel_for(rows, options.jobs, [&](std::size_t i) {
        for (std::size_t j = i + d; j <= n; ++j) {
            if (!split_k(i, j)) continue;
            if (auto v = score(i, j)) exact_rows[i].offer(*v, i, j);
        }
    });
    Best exact;
    for (const Best& b : exact_rows) merge(exact, b);
    if (!exact.found) detail::throw_no_valid_partition();

    const std::size_t i = exact.i, j = exact.j;
    const std::size_t k = *split_k(i, j);
    std::vector<std::size_t> left;  // prefix boundaries, collected right to left
    for (std::size_t cur = i, kk = k; kk >= 2; --kk) {
        std::size_t a = 0;
        while (!(prefix[kk - 1][a] && ok(a, cur))) ++a;
        left.push_back(a);
        cur = a;
    }
    std::vector<std::size_t> splits(left.rbegin(), left.rend());
    if (k >= 1) splits.push_back(i);
    const std::size_t m = s - k;
    if (m >= 1) splits.push_back(j);
    for (std::size_t cur = j, mm = m; mm >= 2; --mm) {
        std::size_t b = cur + d;
        while (!(suffix[mm - 1][b] && ok(cur, b))) ++b;
        splits.push_back(b);
        cur = b;
    }
    return detail::make_result(series, score, std::move(splits), d);
}

/// Dispatches to the linear scan for one split and to mrp_fast otherwise.
inline MrpResult compute_mrp(const ReturnSeries& series, std::size_t s, std::size_t d,
                             const MrpOptions& options = {})
{
    return s == 1 ? mrp_one_split(series, d, options.kind) : mrp_fast(series, s, d, options);
}

struct LeftRightReport {
    double left = 0.0;
    double right = 0.0;
    std::size_t split = 0;  ///< observations in the left segment
    Date split_date;        ///< date of the last left-segment observation
    MrpResult mrp;
};

/// Both segment metrics at the one-split MRP optimum.
inline LeftRightReport left_right_report(const ReturnSeries& series, std::size_t d,
                                         const MetricKind& kind = Sharpe{})
{
    LeftRightReport rep;
    rep.mrp = mrp_one_split(series, d, kind);
    rep.left = rep.mrp.segment_metrics[0];
    rep.right = rep.mrp.segment_metrics[1];
    rep.split = rep.mrp.optimal_splits.splits[0];
    rep.split_date = rep.mrp.split_dates[0];
    return rep;
}

} // namespace mrp
