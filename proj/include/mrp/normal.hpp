#pragma once

#include <cmath>
#include <limits>
#include <numbers>

namespace mrp::normal {

inline constexpr double inv_sqrt_2pi = 0.398942280401432677939946059934;

inline double pdf(double x) { return inv_sqrt_2pi * std::exp(-0.5 * x * x); }

inline double log_pdf(double x) { return -0.5 * x * x + std::log(inv_sqrt_2pi); }

inline double cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

/// 1 - cdf(x) without cancellation in the upper tail.
inline double survival(double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }

/// log(1 - cdf(x)), accurate in both tails.
inline double log_survival(double x)
{
    if (x < 0.0) return std::log1p(-cdf(x));
    if (x < 37.0) return std::log(survival(x));
    // erfc underflows; leading terms of the Mills-ratio expansion.
    const double u = 1.0 / (x * x);
    return log_pdf(x) - std::log(x) + std::log1p(u * (-1.0 + u * (3.0 + u * (-15.0 + u * 105.0))));
}

/// Inverse CDF. Rational approximation (Acklam) followed by one Halley step
/// against erfc, good to a few ulps over (0, 1).
inline double quantile(double p)
{
    if (!(p > 0.0)) return -std::numeric_limits<double>::infinity();
    if (!(p < 1.0)) return std::numeric_limits<double>::infinity();

    static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                   -2.759285104469687e+02, 1.383577518672690e+02,
                                   -3.066479806614716e+01, 2.506628277459239e+00};
    static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                   -1.556989798598866e+02, 6.680131188771972e+01,
                                   -1.328068155288572e+01};
    static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                   -2.400758277161838e+00, -2.549732539343734e+00,
                                   4.374664141464968e+00,  2.938163982698783e+00};
    static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                   2.445134137142996e+00, 3.754408661907416e+00};
    constexpr double p_low = 0.02425;

    double x;
    if (p < p_low) {
        const double q = std::sqrt(-2.0 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (p <= 1.0 - p_low) {
        const double q = p - 0.5;
        const double r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    } else {
        const double q = std::sqrt(-2.0 * std::log1p(-p));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }

    // Halley refinement; use the tail that keeps the residual relative.
    if (x < 0.0) {
        const double e = cdf(x) - p;
        const double u = e / pdf(x);
        x -= u / (1.0 + 0.5 * x * u);
    } else {
        const double e = survival(x) - (1.0 - p);
        const double u = -e / pdf(x);
        x -= u / (1.0 + 0.5 * x * u);
    }
    return x;
}

} // namespace mrp::normal
