#include "contagion/cdo.hpp"
#include "contagion/inversion.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace contagion;

namespace {

const ContagionParams kBase = base_case_portfolio().common;

double pgf_from_pmf(const std::vector<double>& pmf, double theta)
{
    double sum = 0.0;
    for (std::size_t n = pmf.size(); n-- > 0;) sum = sum * theta + pmf[n];
    return sum;
}

}  // namespace

TEST(InversionPoints, PowerOfTwoAtLeastFourTimesTruncation)
{
    EXPECT_EQ(inversion_points(0), 64);
    EXPECT_EQ(inversion_points(16), 64);
    EXPECT_EQ(inversion_points(17), 128);
    EXPECT_EQ(inversion_points(100), 512);
    EXPECT_EQ(inversion_points(4096), 16384);
}

TEST(CountDistribution, DeadProcessIsPointMass)
{
    const ContagionParams dead{.lambda0 = 0, .delta = 2, .eta = 0, .sigma = 0, .beta = 1.5};
    const auto d = count_distribution(dead, 12.0, 8, 1e-12);
    EXPECT_NEAR(d.pmf[0], 1.0, 1e-12);
    for (std::size_t n = 1; n < d.pmf.size(); ++n) EXPECT_NEAR(d.pmf[n], 0.0, 1e-12);
}

TEST(CountDistribution, PoissonMatchesReference)
{
    const auto dists = count_distributions(PoissonProcess{2.25}, {4.0, 12.0});
    for (const auto& d : dists) {
        for (std::size_t n = 0; n < d.pmf.size(); ++n)
            EXPECT_NEAR(d.pmf[n], oracle::poisson_pmf(2.25 * d.horizon, static_cast<int>(n)), 1e-12);
    }
}

TEST(CountDistribution, DeterministicIntensityIsPoisson)
{
    const ContagionParams p{.lambda0 = 2.5, .delta = 0.8, .eta = 1.0, .sigma = 0.0, .beta = 1e9};
    const auto d = count_distribution(p, 6.0, 32, 1e-10);
    const double mean = oracle::deterministic_compensator(p, 6.0);
    for (int n = 0; n < 30; ++n) EXPECT_NEAR(d.pmf[n], oracle::poisson_pmf(mean, n), 1e-9) << n;
}

TEST(CountDistribution, BaseCaseMassMomentsAndPgf)
{
    for (double T : {4.0, 12.0}) {
        const auto d = count_distribution(kBase, T, 64, 1e-8);
        EXPECT_GE(d.captured_mass, 1.0 - 1e-6);
        EXPECT_LE(d.max_imag_residue, 1e-9);
        EXPECT_NEAR(d.mean(), oracle::expected_count(kBase, T), 1e-6);
        for (double p : d.pmf) {
            EXPECT_GE(p, 0.0);
            EXPECT_LE(p, 1.0);
        }
        for (double theta : {0.5, 0.9, 0.99})
            EXPECT_NEAR(pgf_from_pmf(d.pmf, theta), joint_transform(kBase, theta, 0.0, T).value.real(),
                        1e-7);
    }
}

TEST(CountDistribution, AutoExtendsTruncation)
{
    const auto d = count_distribution(kBase, 12.0, 4, 1e-10);
    EXPECT_GT(d.pmf.size(), 64u);
    EXPECT_GE(d.captured_mass, 1.0 - 1e-10);
}

TEST(CountDistribution, CapIsReported)
{
    InversionOptions opts;
    opts.n_max = 4;
    opts.n_max_cap = 16;
    opts.tail_tol = 1e-12;
    EXPECT_THROW(count_distributions(kBase, {12.0}, opts), NumericalError);
    opts.tail_tol = 0.0;
    EXPECT_THROW(count_distributions(kBase, {12.0}, opts), ConfigError);
}

TEST(CountDistribution, ThreadCountDoesNotChangeBits)
{
    InversionOptions serial;
    InversionOptions parallel;
    parallel.jobs = 3;
    const auto a = count_distributions(kBase, {3.0, 12.0}, serial);
    const auto b = count_distributions(kBase, {3.0, 12.0}, parallel);
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i].pmf, b[i].pmf);
}

TEST(CountDistribution, ComparisonModelsHaveMatchedLongRunRate)
{
    // Over a long horizon each matched model counts about λ̄·T events.
    for (auto mode : {ModelMode::poisson, ModelMode::ajd_no_self}) {
        const auto d = count_distributions(matched_process(mode, kBase), {40.0}).front();
        EXPECT_GE(d.captured_mass, 1.0 - 1e-6);
        EXPECT_NEAR(d.mean() / 40.0, 2.25, 0.02) << to_string(mode);
    }
}
