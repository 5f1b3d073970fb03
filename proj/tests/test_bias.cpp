#include <gtest/gtest.h>

#include <numbers>
#include <random>

#include "mrp/mrp.hpp"
#include "oracles.hpp"

using namespace mrp;

TEST(Normal, QuantileInvertsCdf)
{
    EXPECT_NEAR(normal::quantile(0.975), 1.959963984540054, 1e-13);
    for (double p : {1e-300, 1e-20, 1e-6, 0.01, 0.3, 0.5, 0.77, 0.999999})
        EXPECT_NEAR(normal::cdf(normal::quantile(p)) / p, 1.0, 1e-12) << p;
}

TEST(Normal, LogSurvivalDeepTail)
{
    EXPECT_NEAR(normal::log_survival(0.0), std::log(0.5), 1e-15);
    EXPECT_NEAR(normal::log_survival(5.0), std::log(normal::survival(5.0)), 1e-12);
    // erfc underflows past ~38; the asymptotic branch stays finite and monotone.
    EXPECT_TRUE(std::isfinite(normal::log_survival(60.0)));
    EXPECT_LT(normal::log_survival(60.0), normal::log_survival(40.0));
    // long double erfc still resolves the tail at 40.
    const long double ref = std::log(std::erfc(40.0L / std::sqrt(2.0L)) / 2.0L);
    EXPECT_NEAR(normal::log_survival(40.0), static_cast<double>(ref), 1e-9);
}

TEST(Quadrature, Polynomials)
{
    const auto r = integrate([](double x) { return x * x * x - 2 * x; }, -1.0, 3.0);
    EXPECT_NEAR(r.value, (81.0 / 4 - 9) - (1.0 / 4 - 1), 1e-12);
    EXPECT_NEAR(integrate([](double x) { return std::exp(-x * x); }, -10.0, 10.0).value, std::sqrt(std::numbers::pi), 1e-12);
}

TEST(Quadrature, FailsOnSingularity)
{
    try {
        (void)integrate([](double x) { return 1.0 / std::sqrt(std::abs(x - 0.3)); }, 0.0, 1.0, 1e-15, 1e-15, 4, 40);
        ADD_FAILURE();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::quadrature_failed);
    }
}

TEST(ExpectedMin, Examples)
{
    EXPECT_NEAR(expected_min_exact(BiasModel::flat(1)), 0.0, 1e-12);
    EXPECT_NEAR(expected_min_exact(BiasModel::flat(2)) / (-1.0 / std::sqrt(std::numbers::pi)), 1.0, 1e-10);
    EXPECT_NEAR(expected_min_standard(10), -1.538752730835, 1e-10);
    EXPECT_NEAR(expected_min_standard(100), -2.507593636442, 1e-10);
    EXPECT_NEAR(expected_min_standard(1e4), -3.851615817067, 1e-9);
    EXPECT_NEAR(expected_min_standard(1e6), -4.862897486196, 1e-9);
}

TEST(ExpectedMin, AgreesWithSimpsonOracle)
{
    for (double N : {1.0, 2.0, 3.0, 7.0, 50.0, 1000.0, 1e5})
        EXPECT_NEAR(expected_min_standard(N), oracle::expected_min_simpson(N), 1e-8) << N;
}

TEST(ExpectedMin, LocationScale)
{
    for (std::uint64_t N : {1u, 4u, 33u, 1000u}) {
        const BiasModel m{-0.7, 2.5, 1, N};
        EXPECT_NEAR(expected_min_exact(m), -0.7 + 2.5 * expected_min_exact(BiasModel::flat(N)), 1e-10);
    }
}

TEST(ExpectedMin, InvalidModel)
{
    for (const BiasModel& m : {BiasModel{0, 1, 1, 0}, BiasModel{0, 0, 1, 5}, BiasModel{0, -1, 1, 5}, BiasModel{0, 1, 0, 5}}) {
        try {
            (void)expected_min_exact(m);
            ADD_FAILURE();
        } catch (const Error& e) {
            EXPECT_EQ(e.code(), Errc::invalid_model);
        }
    }
}

TEST(ExpectedMin, MonteCarloOracleTenMillionDraws)
{
    // mu = 0.5, sigma = 2, N = 10: 1e6 trials of 10 draws from std::mt19937_64.
    std::mt19937_64 rng(2024);
    std::normal_distribution<double> z(0.5, 2.0);
    const int trials = 1000000;
    double sum = 0, sumsq = 0;
    for (int t = 0; t < trials; ++t) {
        double m = 1e300;
        for (int k = 0; k < 10; ++k) m = std::min(m, z(rng));
        sum += m;
        sumsq += m * m;
    }
    const double mean = sum / trials;
    const double se = std::sqrt((sumsq / trials - mean * mean) / trials);
    EXPECT_LE(std::abs(mean - expected_min_exact({0.5, 2.0, 1, 10})), 3 * se);
}

TEST(BiasExact, ExamplesAndShape)
{
    EXPECT_NEAR(bias_exact(BiasModel::flat(1)), 0.0, 1e-12);
    EXPECT_NEAR(bias_exact(BiasModel::flat(2)), 1.0 / std::sqrt(std::numbers::pi), 1e-10);
    for (std::uint64_t N : {2u, 10u, 500u})
        EXPECT_NEAR(bias_exact(BiasModel::flat(N, 0, 2.0)), 2.0 * bias_exact(BiasModel::flat(N)), 1e-10);
    double prev = -1.0;
    for (std::uint64_t N = 1; N <= 100; ++N) {
        const double b = bias_exact(BiasModel::flat(N, 0.3, 1.0));
        EXPECT_GE(b, 0.0);
        EXPECT_GT(b, prev) << N;
        prev = b;
    }
}

TEST(BiasExact, GroupedModelUsesProduct)
{
    EXPECT_EQ(bias_exact({0, 1, 2, 5}), bias_exact(BiasModel::flat(10)));
}

TEST(Gumbel, Constants)
{
    const auto g = gumbel_constants(1e6);
    EXPECT_NEAR(g.b, 4.766006, 1e-6);
    EXPECT_NEAR(g.a, 0.209819, 1e-6);
    EXPECT_NEAR(std::sqrt(2 * std::log(1e6)), 5.2565, 1e-4);
    EXPECT_NEAR(g.gamma, 0.5772156649, 1e-10);
    EXPECT_NEAR(gumbel_constants(2).b, std::sqrt(2 * std::log(2.0)), 1e-15);
    EXPECT_THROW((void)gumbel_constants(1.5), Error);
    double prev = 0;
    for (double N = 8; N < 1e7; N *= 1.7) {
        EXPECT_GT(gumbel_constants(N).b, prev);
        prev = gumbel_constants(N).b;
    }
}

TEST(Gumbel, MillsRatioSelfConsistency)
{
    for (double N : {1e3, 1e4, 1e5, 1e6, 1e8}) {
        const double b = gumbel_constants(N).b;
        const double v = N * normal::pdf(b) / b;
        EXPECT_GE(v, 0.8) << N;
        EXPECT_LE(v, 1.25) << N;
    }
}

TEST(BiasAsymptotic, RelativeErrorShrinks)
{
    auto rel = [](double N) {
        const auto m = BiasModel::flat(static_cast<std::uint64_t>(N));
        return std::abs(bias_asymptotic(m) - bias_exact(m)) / bias_exact(m);
    };
    EXPECT_LE(rel(1e4), 0.05);
    EXPECT_LE(rel(1e6), 0.03);
    EXPECT_GT(rel(1e3), rel(1e4));
    EXPECT_GT(rel(1e4), rel(1e5));
    EXPECT_GT(rel(1e5), rel(1e6));
    EXPECT_THROW((void)bias_asymptotic(BiasModel::flat(2)), Error);
}

TEST(BiasAsymptotic, MatchesClosedFormMagnitude)
{
    const double N = 5e4, sigma = 1.7;
    const double L = std::log(N);
    const double closed = sigma * (std::log(L) + std::log(4 * std::numbers::pi) - 4 * L) / (2 * std::sqrt(2 * L));
    EXPECT_NEAR(bias_asymptotic(BiasModel::flat(50000, 0, sigma)), -closed, 1e-12);
}

TEST(Simulate, MeanWithinThreeStandardErrors)
{
    for (std::uint64_t N : {1u, 2u, 10u}) {
        const auto m = BiasModel::flat(N, 0.2, 1.5);
        const auto s = summarize(simulate_min_model(m, {200000, 9, 1}));
        EXPECT_LE(std::abs(s.mean - expected_min_exact(m)), 3 * s.se) << N;
    }
}

TEST(Simulate, WorkerCountIndependent)
{
    const BiasModel m{0, 1, 3, 7};
    EXPECT_EQ(simulate_min_model(m, {5000, 4, 1}), simulate_min_model(m, {5000, 4, 8}));
}

TEST(Simulate, LocationShiftIsExact)
{
    const auto a = simulate_min_model({0.0, 1.0, 1, 20}, {2000, 3, 1});
    const auto b = simulate_min_model({0.75, 1.0, 1, 20}, {2000, 3, 1});
    for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(b[i], 0.75 + a[i]);
}

TEST(Simulate, GroupedEqualsFlatInDistribution)
{
    const auto grouped = simulate_min_model({0, 1, 2, 5}, {100000, 17, 1});
    const auto flat = simulate_min_model(BiasModel::flat(10), {100000, 18, 1});
    // Two-sample KS critical value at alpha = 0.001 for n = m = 1e5.
    const double crit = 1.95 * std::sqrt(2.0 / 100000);
    EXPECT_LT(oracle::ks_two_sample(grouped, flat), crit);
}

TEST(Simulate, InverseCdfSamplerAgreesWithStdSampler)
{
    std::mt19937_64 rng(77);
    std::normal_distribution<double> z;
    std::vector<double> ref(100000);
    for (auto& v : ref) {
        double m = 1e300;
        for (int k = 0; k < 10; ++k) m = std::min(m, z(rng));
        v = m;
    }
    const auto ours = simulate_min_model(BiasModel::flat(10), {100000, 5, 1});
    EXPECT_LT(oracle::ks_two_sample(ours, ref), 1.95 * std::sqrt(2.0 / 100000));
}

TEST(Ks, AgainstExactCdf)
{
    EXPECT_NEAR(negated_gumbel_cdf(0.0), 1.0 - std::exp(-1.0), 1e-15);
    std::vector<double> sample{0.5};
    EXPECT_NEAR(ks_distance(sample, [](double x) { return x; }), 0.5, 1e-15);
}

TEST(GumbelDiagnostic, DriftAndShape)
{
    const auto d = gumbel_limit_diagnostic(BiasModel::flat(1000), {20000, 3, 1});
    ASSERT_EQ(d.drift.size(), 3u);
    EXPECT_EQ(d.drift[0].N, 10u);
    EXPECT_EQ(d.drift[2].N, 1000u);
    EXPECT_TRUE(d.strictly_decreasing);
    for (const auto& row : d.drift) EXPECT_LE(std::abs(row.simulated_mean - row.exact), 4 * row.se);
    EXPECT_LT(d.ks, 0.1);
    EXPECT_THROW((void)gumbel_limit_diagnostic(BiasModel::flat(5), {}), Error);
    EXPECT_EQ(decade_grid(250), (std::vector<std::uint64_t>{10, 100, 250}));
}
