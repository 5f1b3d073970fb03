#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "mrp/error.hpp"
#include "mrp/normal.hpp"
#include "mrp/parallel.hpp"
#include "mrp/quadrature.hpp"
#include "mrp/random.hpp"

namespace mrp {

/// Idealized sampling model of MRP_s: the s * n_s segment metrics are i.i.d.
/// N(mu, sigma^2) and MRP_s is their minimum, taken as the minimum over n_s
/// groups of the minimum over s draws.
struct BiasModel {
    double mu = 0.0;
    double sigma = 1.0;
    std::uint64_t s = 1;
    std::uint64_t n_s = 1;

    /// Number of order statistics the minimum runs over.
    std::uint64_t N() const noexcept { return s * n_s; }

    /// s = 1 with N groups; the distribution of the minimum depends on N only.
    static BiasModel flat(std::uint64_t count, double mu = 0.0, double sigma = 1.0)
    {
        return BiasModel{mu, sigma, 1, count};
    }

    void validate() const
    {
        if (!(sigma > 0.0) || !std::isfinite(sigma) || !std::isfinite(mu))
            throw Error(Errc::invalid_model, "sigma must be positive and finite");
        if (s < 1 || n_s < 1) throw Error(Errc::invalid_model, "s and n_s must be at least 1");
        if (n_s > std::numeric_limits<std::uint64_t>::max() / s)
            throw Error(Errc::invalid_model, "s * n_s overflows");
    }
};

/// Location b and scale a = 1/b of the Gumbel law approximating the maximum
/// of N standard normals, with the Euler-Mascheroni constant for the mean.
struct GumbelConstants {
    double b = 0.0;
    double a = 0.0;
    double gamma = std::numbers::egamma;

    /// b + a * gamma, the Gumbel mean of the maximum.
    double mean_max() const noexcept { return b + a * gamma; }
};

/// b = sqrt(2 ln N) - (ln ln N + ln 4pi) / (2 sqrt(2 ln N)), from 1 - Phi(b) = 1/N
/// with the Mills-ratio tail. At N = 2 the correction is not defined
/// (ln ln 2 < 0), so b = sqrt(2 ln 2).
inline GumbelConstants gumbel_constants(double N)
{
    if (!(N >= 2.0)) throw Error(Errc::invalid_model, "Gumbel constants need N >= 2");
    const double log_n = std::log(N);
    const double lead = std::sqrt(2.0 * log_n);
    GumbelConstants g;
    g.b = N < 3.0 ? lead
                  : lead - (std::log(log_n) + std::log(4.0 * std::numbers::pi)) / (2.0 * lead);
    g.a = 1.0 / g.b;
    return g;
}

/// E[min of N i.i.d. standard normals] = N * int z phi(z) (1 - Phi(z))^(N-1) dz,
/// integrated in log space so (1 - Phi)^(N-1) cannot underflow to garbage.
inline double expected_min_standard(double N)
{
    if (!(N >= 1.0)) throw Error(Errc::invalid_model, "N must be at least 1");
    const double b = N >= 2.0 ? gumbel_constants(N).b : 1.0;
    const double bound = b + 12.0 / b + 2.0;
    const double log_n = std::log(N);
    auto density_times_z = [&](double z) {
        const double log_f = log_n + normal::log_pdf(z) + (N - 1.0) * normal::log_survival(z);
        return z * std::exp(log_f);
    };
    return integrate(density_times_z, -bound, bound, 1e-13, 1e-13).value;
}

inline double expected_min_exact(const BiasModel& model)
{
    model.validate();
    return model.mu + model.sigma * expected_min_standard(static_cast<double>(model.N()));
}

/// E[X] - E[Z] = -sigma * E[Z'], non-negative and linear in sigma.
inline double bias_exact(const BiasModel& model)
{
    model.validate();
    return -model.sigma * expected_min_standard(static_cast<double>(model.N()));
}

/// Leading extreme-value approximation of the bias, sigma * b. This is the
/// magnitude of sigma (ln ln N + ln 4pi - 4 ln N) / (2 sqrt(2 ln N)); the
/// a * gamma term of the Gumbel mean is left out.
inline double bias_asymptotic(const BiasModel& model)
{
    model.validate();
    const double N = static_cast<double>(model.N());
    if (N < 3.0) throw Error(Errc::invalid_model, "asymptotic bias needs N >= 3");
    return model.sigma * gumbel_constants(N).b;
}

// ---------------------------------------------------------------------------
// Monte Carlo

struct SimulationOptions {
    std::uint64_t trials = 100000;
    std::uint64_t seed = 1;
    unsigned jobs = 1;
};

struct SampleSummary {
    double mean = 0.0;
    double sd = 0.0;
    double se = 0.0;
    std::size_t count = 0;
};

inline SampleSummary summarize(const std::vector<double>& sample)
{
    SampleSummary out;
    out.count = sample.size();
    if (sample.empty()) return out;
    double sum = 0.0;
    for (double x : sample) sum += x;
    out.mean = sum / static_cast<double>(sample.size());
    if (sample.size() > 1) {
        double ss = 0.0;
        for (double x : sample) ss += (x - out.mean) * (x - out.mean);
        out.sd = std::sqrt(ss / static_cast<double>(sample.size() - 1));
        out.se = out.sd / std::sqrt(static_cast<double>(sample.size()));
    }
    return out;
}

/// Draws Z = min over n_s groups of the min over s N(mu, sigma^2) variables.
///
/// Normals come from the inverse transform of uniforms. The transform is
/// increasing, so each group minimum is the transform of the smallest uniform
/// in the group; only the overall minimum is transformed. Trial t reads stream
/// t of the seed, so the sample is identical for any job count.
inline std::vector<double> simulate_min_model(const BiasModel& model, const SimulationOptions& options)
{
    model.validate();
    if (options.trials < 1) throw Error(Errc::invalid_argument, "trials must be at least 1");
    std::vector<double> z(options.trials);
    parallel_for(options.trials, options.jobs, [&](std::size_t t) {
        CounterRng rng(options.seed, t);
        double overall = 1.0;
        for (std::uint64_t g = 0; g < model.n_s; ++g) {
            double group = 1.0;
            for (std::uint64_t j = 0; j < model.s; ++j) group = std::min(group, rng.uniform());
            overall = std::min(overall, group);
        }
        z[t] = model.mu + model.sigma * normal::quantile(overall);
    });
    return z;
}

/// CDF of -G with G standard Gumbel: P(-G <= w) = 1 - exp(-exp(w)).
inline double negated_gumbel_cdf(double w) { return -std::expm1(-std::exp(w)); }

/// One-sample Kolmogorov-Smirnov distance between a sample and a continuous CDF.
template <class Cdf>
double ks_distance(std::vector<double> sample, Cdf cdf)
{
    if (sample.empty()) throw Error(Errc::invalid_argument, "KS distance of empty sample");
    std::sort(sample.begin(), sample.end());
    const double n = static_cast<double>(sample.size());
    double worst = 0.0;
    for (std::size_t i = 0; i < sample.size(); ++i) {
        const double f = cdf(sample[i]);
        worst = std::max({worst, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
    }
    return worst;
}

struct DriftRow {
    std::uint64_t N = 0;
    double simulated_mean = 0.0;
    double se = 0.0;
    double exact = 0.0;
};

struct GumbelDiagnostic {
    double ks = 0.0;           ///< KS distance of (Z' + b) / a to the negated Gumbel law
    GumbelConstants constants;
    std::vector<DriftRow> drift;
    bool strictly_decreasing = false;  ///< consecutive means separated by >= 3 combined SE
};

/// Decades 10, 100, ... up to N, with N appended when it is not a power of ten.
inline std::vector<std::uint64_t> decade_grid(std::uint64_t N)
{
    std::vector<std::uint64_t> grid;
    for (std::uint64_t k = 10; k <= N; k *= 10) {
        grid.push_back(k);
        if (k > std::numeric_limits<std::uint64_t>::max() / 10) break;
    }
    if (grid.empty() || grid.back() != N) grid.push_back(N);
    return grid;
}

/// Simulates the model, standardizes Z' = (Z - mu) / sigma by the Gumbel
/// constants of N and measures its KS distance to -G. Also tabulates the
/// simulated mean of Z over a decade grid of N to show it drifting down
/// without bound.
inline GumbelDiagnostic gumbel_limit_diagnostic(const BiasModel& model, const SimulationOptions& options)
{
    model.validate();
    if (model.N() < 10) throw Error(Errc::invalid_model, "Gumbel diagnostic needs N >= 10");
    GumbelDiagnostic out;
    out.constants = gumbel_constants(static_cast<double>(model.N()));

    const auto sample = simulate_min_model(model, options);
    const auto& g = out.constants;
    std::vector<double> standardized(sample.size());
    for (std::size_t i = 0; i < sample.size(); ++i)
        standardized[i] = ((sample[i] - model.mu) / model.sigma + g.b) / g.a;
    out.ks = ks_distance(std::move(standardized), negated_gumbel_cdf);

    for (std::uint64_t n : decade_grid(model.N())) {
        DriftRow row;
        row.N = n;
        const auto s = n == model.N()
                           ? summarize(sample)
                           : summarize(simulate_min_model(
                                 BiasModel::flat(n, model.mu, model.sigma),
                                 SimulationOptions{options.trials, options.seed ^ splitmix64(n), options.jobs}));
        row.simulated_mean = s.mean;
        row.se = s.se;
        row.exact = model.mu + model.sigma * expected_min_standard(static_cast<double>(n));
        out.drift.push_back(row);
    }
    out.strictly_decreasing = true;
    for (std::size_t k = 1; k < out.drift.size(); ++k) {
        const auto& prev = out.drift[k - 1];
        const auto& cur = out.drift[k];
        const double sep = 3.0 * std::hypot(prev.se, cur.se);
        if (!(prev.simulated_mean - cur.simulated_mean >= sep)) out.strictly_decreasing = false;
    }
    return out;
}

} // namespace mrp
