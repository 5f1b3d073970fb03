#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <queue>
#include <string>
#include <vector>

#include "mrp/error.hpp"

namespace mrp {

struct QuadratureResult {
    double value = 0.0;
    double error_estimate = 0.0;
    std::size_t intervals = 0;
};

namespace detail {

struct KronrodPanel {
    double lo, hi, value, error;
    bool operator<(const KronrodPanel& other) const { return error < other.error; }
};

// 15-point Kronrod extension of the 7-point Gauss rule (QUADPACK qk15).
template <class F>
KronrodPanel kronrod15(F& f, double lo, double hi)
{
    static constexpr double xgk[8] = {
        0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
        0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
        0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
        0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
    static constexpr double wgk[8] = {
        0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
        0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
        0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
        0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
    static constexpr double wg[4] = {
        0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
        0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

    const double centre = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo);
    const double fc = f(centre);
    double kronrod = wgk[7] * fc;
    double gauss = wg[3] * fc;
    for (int k = 0; k < 7; ++k) {
        const double dx = half * xgk[k];
        const double pair = f(centre - dx) + f(centre + dx);
        kronrod += wgk[k] * pair;
        if (k % 2 == 1) gauss += wg[k / 2] * pair;
    }
    return {lo, hi, kronrod * half, std::abs((kronrod - gauss) * half)};
}

} // namespace detail

/// Globally adaptive Gauss-Kronrod integration of f over [lo, hi]. Splits the
/// panel with the largest error estimate until the summed estimate is below
/// max(abs_tol, rel_tol * |value|). Throws QuadratureFailed past max_panels.
template <class F>
QuadratureResult integrate(F f, double lo, double hi, double abs_tol = 1e-12, double rel_tol = 1e-12,
                           std::size_t initial_panels = 16, std::size_t max_panels = 4000)
{
    std::priority_queue<detail::KronrodPanel> panels;
    double value = 0.0, error = 0.0;
    const double width = (hi - lo) / static_cast<double>(initial_panels);
    for (std::size_t k = 0; k < initial_panels; ++k) {
        const double a = lo + width * static_cast<double>(k);
        const double b = k + 1 == initial_panels ? hi : a + width;
        auto p = detail::kronrod15(f, a, b);
        value += p.value;
        error += p.error;
        panels.push(p);
    }
    while (error > std::max(abs_tol, rel_tol * std::abs(value))) {
        if (panels.size() >= max_panels)
            throw Error(Errc::quadrature_failed, "no convergence after " + std::to_string(max_panels) +
                                                     " panels (error estimate " + std::to_string(error) + ")");
        const auto worst = panels.top();
        panels.pop();
        const double mid = 0.5 * (worst.lo + worst.hi);
        const auto left = detail::kronrod15(f, worst.lo, mid);
        const auto right = detail::kronrod15(f, mid, worst.hi);
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        panels.push(left);
        panels.push(right);
    }
    // Re-sum to shed drift from the running updates.
    QuadratureResult out;
    out.intervals = panels.size();
    while (!panels.empty()) {
        out.value += panels.top().value;
        out.error_estimate += panels.top().error;
        panels.pop();
    }
    return out;
}

} // namespace mrp
