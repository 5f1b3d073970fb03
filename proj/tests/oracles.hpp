#pragma once

// Direct computations used as references in tests. Nothing here touches the
// prefix tables or the search code in include/mrp.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <random>
#include <vector>

namespace oracle {

struct TwoPass {
    double mean = 0.0;
    double stdev = 0.0;
};

inline TwoPass two_pass(const std::vector<double>& x, std::size_t start, std::size_t end)
{
    const double n = static_cast<double>(end - start);
    double sum = 0.0;
    for (std::size_t i = start; i < end; ++i) sum += x[i];
    const double mean = sum / n;
    double ss = 0.0;
    for (std::size_t i = start; i < end; ++i) ss += (x[i] - mean) * (x[i] - mean);
    return {mean, end - start > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0};
}

inline double sharpe(const std::vector<double>& x, std::size_t start, std::size_t end, double ppy = 252.0)
{
    const auto t = two_pass(x, start, end);
    return t.mean / t.stdev * std::sqrt(ppy);
}

inline double sortino(const std::vector<double>& x, std::size_t start, std::size_t end, double mar, double ppy = 252.0)
{
    double excess = 0.0, down = 0.0;
    for (std::size_t i = start; i < end; ++i) {
        excess += x[i] - mar;
        if (x[i] < mar) down += (x[i] - mar) * (x[i] - mar);
    }
    const double n = static_cast<double>(end - start);
    return (excess / n) / std::sqrt(down / n) * std::sqrt(ppy);
}

inline double drawdown(const std::vector<double>& r)
{
    std::vector<double> wealth{1.0};
    for (double x : r) wealth.push_back(wealth.back() * (1.0 + x));
    double worst = 0.0;
    for (std::size_t t = 0; t < wealth.size(); ++t) {
        double peak = 0.0;
        for (std::size_t u = 0; u <= t; ++u) peak = std::max(peak, wealth[u]);
        worst = std::max(worst, 1.0 - wealth[t] / peak);
    }
    return worst;
}

inline double rolling_sharpe_sd(const std::vector<double>& x, std::size_t w, double ppy = 252.0)
{
    std::vector<double> s;
    for (std::size_t i = 0; i + w <= x.size(); ++i) s.push_back(sharpe(x, i, i + w, ppy));
    double m = 0.0;
    for (double v : s) m += v;
    m /= static_cast<double>(s.size());
    double ss = 0.0;
    for (double v : s) ss += (v - m) * (v - m);
    return std::sqrt(ss / static_cast<double>(s.size() - 1));
}

/// Every split set with segments >= d, by recursion on the next boundary.
inline std::vector<std::vector<std::size_t>> all_splits(std::size_t n, std::size_t s, std::size_t d)
{
    std::vector<std::vector<std::size_t>> out;
    std::vector<std::size_t> cur;
    std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t from, std::size_t left) {
        if (left == 0) {
            if (n - from >= d) out.push_back(cur);
            return;
        }
        for (std::size_t t = from + d; t + left * d <= n; ++t) {
            cur.push_back(t);
            rec(t, left - 1);
            cur.pop_back();
        }
    };
    rec(0, s);
    return out;
}

struct MinPartition {
    double value = std::numeric_limits<double>::infinity();
    std::vector<std::size_t> splits;
    bool found = false;
};

/// Exhaustive minimum of the worst segment Sharpe, computed segment by segment with two passes.
inline MinPartition brute_mrp(const std::vector<double>& x, std::size_t s, std::size_t d, double ppy = 252.0)
{
    MinPartition best;
    for (const auto& sp : all_splits(x.size(), s, d)) {
        double worst = std::numeric_limits<double>::infinity();
        bool ok = true;
        for (std::size_t k = 0; k <= s; ++k) {
            const std::size_t a = k == 0 ? 0 : sp[k - 1];
            const std::size_t b = k == s ? x.size() : sp[k];
            const auto t = two_pass(x, a, b);
            if (!(t.stdev > 0.0)) {
                ok = false;
                break;
            }
            worst = std::min(worst, t.mean / t.stdev * std::sqrt(ppy));
        }
        if (ok && worst < best.value) {
            best.value = worst;
            best.splits = sp;
            best.found = true;
        }
    }
    return best;
}

inline std::vector<double> gaussian(std::mt19937_64& rng, std::size_t n, double mu = 0.0, double sd = 1.0)
{
    std::normal_distribution<double> dist(mu, sd);
    std::vector<double> x(n);
    for (auto& v : x) v = dist(rng);
    return x;
}

inline double pearson(const std::vector<double>& a, const std::vector<double>& b)
{
    const double n = static_cast<double>(a.size());
    double sa = 0, sb = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        sa += a[i];
        sb += b[i];
    }
    double cov = 0, va = 0, vb = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        cov += (a[i] - sa / n) * (b[i] - sb / n);
        va += (a[i] - sa / n) * (a[i] - sa / n);
        vb += (b[i] - sb / n) * (b[i] - sb / n);
    }
    return (cov / (n - 1)) / std::sqrt((va / (n - 1)) * (vb / (n - 1)));
}

/// Composite Simpson on a uniform grid in linear space.
template <class F>
double simpson(F f, double lo, double hi, int panels)
{
    const double h = (hi - lo) / panels;
    double sum = f(lo) + f(hi);
    for (int k = 1; k < panels; ++k) sum += f(lo + h * k) * (k % 2 ? 4.0 : 2.0);
    return sum * h / 3.0;
}

/// E[min of N standard normals] as int_0^inf P(min > z) dz - int_-inf^0 P(min <= z) dz.
inline double expected_min_simpson(double N)
{
    auto surv = [](double z) { return 0.5 * std::erfc(z / std::sqrt(2.0)); };
    auto p_min_gt = [&](double z) { return std::pow(surv(z), N); };
    const double upper = oracle::simpson(p_min_gt, 0.0, 10.0, 20000);
    const double lower = oracle::simpson([&](double z) { return 1.0 - p_min_gt(z); }, -12.0, 0.0, 20000);
    return upper - lower;
}

/// Two-sample Kolmogorov-Smirnov statistic.
inline double ks_two_sample(std::vector<double> a, std::vector<double> b)
{
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    std::size_t i = 0, j = 0;
    double worst = 0.0;
    while (i < a.size() && j < b.size()) {
        const double v = std::min(a[i], b[j]);
        while (i < a.size() && a[i] <= v) ++i;
        while (j < b.size() && b[j] <= v) ++j;
        worst = std::max(worst, std::abs(static_cast<double>(i) / a.size() - static_cast<double>(j) / b.size()));
    }
    return worst;
}

} // namespace oracle
