#include "contagion/simulation.hpp"
#include "contagion/transform.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

using namespace contagion;

namespace {

const ContagionParams kBase = base_case_portfolio().common;

SimConfig quick(std::int64_t paths, std::uint64_t seed = 11)
{
    SimConfig cfg;
    cfg.n_paths = paths;
    cfg.seed = seed;
    return cfg;
}

double lowest_value(const std::vector<double>& path)
{
    return path.empty() ? 0.0 : *std::min_element(path.begin(), path.end());
}

// One shared base-case sample observed at four and twelve quarters.
class BaseSample : public ::testing::Test {
protected:
    static void SetUpTestSuite() { sample_ = new SnapshotSample(simulate_snapshots(kBase, {4.0, 12.0}, quick(20000))); }
    static void TearDownTestSuite()
    {
        delete sample_;
        sample_ = nullptr;
    }
    static const SnapshotSample& sample() { return *sample_; }

private:
    static SnapshotSample* sample_;
};

SnapshotSample* BaseSample::sample_ = nullptr;

}  // namespace

TEST(SimConfig, Checks)
{
    EXPECT_TRUE(check(SimConfig{}).empty());
    SimConfig bad;
    bad.n_paths = 0;
    bad.dt = 0.02;
    bad.jobs = 0;
    const auto errors = check(bad);
    ASSERT_EQ(errors.size(), 3u);
    EXPECT_EQ(errors[0].field, "simulation.n_paths");
    EXPECT_EQ(errors[1].field, "simulation.dt");
    EXPECT_EQ(errors[2].field, "simulation.jobs");
}

TEST(SimConfig, Names)
{
    for (auto s : {Scheme::euler_bernoulli, Scheme::euler_poisson_step})
        EXPECT_EQ(scheme_from_string(to_string(s)), s);
    for (auto f : {FloorPolicy::none, FloorPolicy::reflect_zero_rate, FloorPolicy::clip_zero_rate})
        EXPECT_EQ(floor_policy_from_string(to_string(f)), f);
    EXPECT_THROW(scheme_from_string("milstein"), ConfigError);
}

TEST(StreamId, DisjointRoles)
{
    EXPECT_EQ(stream_id(0, 0), 0u);
    EXPECT_EQ(stream_id(1, 0), 65536u);
    EXPECT_NE(stream_id(1, 3), stream_id(0, 65539 - 65536 + 3));
}

TEST(Paths, DeadProcessHasNoEvents)
{
    const ContagionParams dead{.lambda0 = 0, .delta = 2, .eta = 0, .sigma = 0, .beta = 1.5};
    const auto paths = simulate_paths(dead, 12.0, quick(1), 0, 50);
    for (const auto& p : paths) {
        EXPECT_TRUE(p.event_times.empty());
        EXPECT_EQ(p.terminal_intensity, 0.0);
    }
    const auto hist = estimate_count_distribution(dead, 12.0, quick(500));
    EXPECT_EQ(hist.probability[0].mean, 1.0);
    EXPECT_EQ(hist.probability[0].std_error, 0.0);
}

TEST(Paths, EveryEventJumpsTheIntensity)
{
    ContagionParams p = kBase;
    p.sigma = 0.0;
    SimConfig cfg = quick(1);
    cfg.dt = 1e-3;
    const auto paths = simulate_paths(p, 6.0, cfg, 0, 20, true);
    for (const auto& path : paths) {
        std::size_t jumps = 0;
        double prev = p.lambda0;
        for (double lambda : path.intensity) {
            const double drift_only = prev + p.delta * (p.eta - prev) * cfg.dt;
            if (lambda - drift_only > 1e-12) ++jumps;
            prev = lambda;
        }
        EXPECT_EQ(jumps, path.event_times.size());
        EXPECT_EQ(path.intensity.back(), path.terminal_intensity);
        EXPECT_TRUE(std::is_sorted(path.event_times.begin(), path.event_times.end()));
    }
}

TEST(Paths, FloorPolicies)
{
    ContagionParams wild{.lambda0 = 0.1, .delta = 2.0, .eta = 0.1, .sigma = 1.5, .beta = 1.5};
    SimConfig cfg = quick(1);
    for (auto policy : {FloorPolicy::none, FloorPolicy::reflect_zero_rate, FloorPolicy::clip_zero_rate}) {
        cfg.floor_policy = policy;
        double lowest = 0.0;
        for (const auto& path : simulate_paths(wild, 4.0, cfg, 0, 20, true))
            lowest = std::min(lowest, lowest_value(path.intensity));
        if (policy == FloorPolicy::none)
            EXPECT_LT(lowest, 0.0);
        else
            EXPECT_GE(lowest, 0.0) << to_string(policy);
    }
}

TEST(Paths, IndependentOfBatchBoundaries)
{
    const auto whole = simulate_paths(kBase, 2.0, quick(1), 0, 10);
    const auto tail = simulate_paths(kBase, 2.0, quick(1), 6, 4);
    for (int i = 0; i < 4; ++i) {
        EXPECT_EQ(whole[6 + i].event_times, tail[i].event_times);
        EXPECT_EQ(whole[6 + i].terminal_intensity, tail[i].terminal_intensity);
    }
}

TEST(Estimates, TrivialTransform)
{
    const auto e = estimate_transform(kBase, 1.0, 0.0, 12.0, quick(10));
    EXPECT_EQ(e.mean, 1.0);
    EXPECT_EQ(e.std_error, 0.0);
}

TEST(Estimates, PoissonLimit)
{
    const ContagionParams flat{.lambda0 = 1.5, .delta = 2.0, .eta = 1.5, .sigma = 0.0, .beta = 1e9};
    for (auto scheme : {Scheme::euler_bernoulli, Scheme::euler_poisson_step}) {
        SimConfig cfg = quick(20000);
        cfg.scheme = scheme;
        const auto s = simulate_snapshots(flat, {4.0}, cfg);
        double sum = 0, sum2 = 0;
        for (std::int64_t i = 0; i < s.n_paths; ++i) {
            const double n = s.count(i, 0);
            sum += n;
            sum2 += n * n;
        }
        const double mean = sum / s.n_paths;
        const double se = std::sqrt((sum2 / s.n_paths - mean * mean) / (s.n_paths - 1));
        EXPECT_NEAR(mean, 6.0, 3 * se) << to_string(scheme);
        EXPECT_NEAR(sum2 / s.n_paths - mean * mean, 6.0, 0.3);  // Poisson dispersion
    }
}

TEST_F(BaseSample, TransformWithinThreeStandardErrors)
{
    for (std::size_t k : {0u, 1u})
        for (double v : {0.0, 0.5}) {
            const auto e = transform_estimate(sample(), k, 0.97, v);
            const double analytic = joint_transform(kBase, 0.97, v, sample().times[k]).value.real();
            EXPECT_NEAR(e.mean, analytic, 3 * e.std_error) << "t=" << sample().times[k] << " v=" << v;
        }
}

TEST_F(BaseSample, MeanCountWithinThreeStandardErrors)
{
    for (std::size_t k : {0u, 1u}) {
        const auto h = count_histogram(sample(), k);
        double mean = 0.0, m2 = 0.0;
        for (std::size_t n = 0; n < h.probability.size(); ++n) {
            mean += n * h.probability[n].mean;
            m2 += double(n) * n * h.probability[n].mean;
        }
        const double se = std::sqrt((m2 - mean * mean) / (h.n_paths - 1));
        EXPECT_NEAR(mean, oracle::expected_count(kBase, h.horizon), 3 * se);
    }
}

TEST_F(BaseSample, TimeAveragedIntensity)
{
    const auto e = time_average_intensity(sample(), 1);
    const double kappa = kBase.delta - 1.0 / kBase.beta;
    const double expected = oracle::expected_count(kBase, 12.0) / 12.0;
    EXPECT_NEAR(e.mean, expected, 3 * e.std_error);
    EXPECT_NEAR(expected, 2.25 + (1.5 - 2.25) * (1 - std::exp(-kappa * 12)) / (kappa * 12), 1e-14);
    // terminal intensity mean
    double sum = 0;
    for (std::int64_t p = 0; p < sample().n_paths; ++p) sum += sample().lambda(p, 1);
    EXPECT_NEAR(sum / sample().n_paths, oracle::expected_intensity(kBase, 12.0), 0.03);
}

TEST_F(BaseSample, HistogramIsDistribution)
{
    const auto h = count_histogram(sample(), 0);
    double total = 0.0;
    for (const auto& p : h.probability) {
        total += p.mean;
        EXPECT_NEAR(p.std_error, std::sqrt(p.mean * (1 - p.mean) / h.n_paths), 1e-15);
    }
    EXPECT_NEAR(total, 1.0, 1e-12);
}

TEST(Estimates, ReproducibleAcrossThreadCounts)
{
    SimConfig one = quick(3000, 5);
    SimConfig three = one;
    three.jobs = 3;
    const auto a = simulate_snapshots(kBase, {1.0, 3.0}, one);
    const auto b = simulate_snapshots(kBase, {1.0, 3.0}, three);
    EXPECT_EQ(a.counts, b.counts);
    EXPECT_EQ(a.intensity, b.intensity);
    EXPECT_EQ(a.integrated_intensity, b.integrated_intensity);
    const auto c = simulate_snapshots(kBase, {1.0, 3.0}, quick(3000, 6));
    EXPECT_NE(a.counts, c.counts);
}

TEST(Estimates, StepHalvingWithinTwoCombinedErrors)
{
    SimConfig coarse = quick(20000, 21);
    coarse.dt = 2e-3;
    SimConfig fine = quick(20000, 22);
    fine.dt = 1e-3;
    const auto a = estimate_transform(kBase, 0.97, 0.0, 4.0, coarse);
    const auto b = estimate_transform(kBase, 0.97, 0.0, 4.0, fine);
    EXPECT_LT(std::abs(a.mean - b.mean), 2 * std::hypot(a.std_error, b.std_error));
}

TEST(Portfolio, DefaultTimesLimits)
{
    PortfolioSpec spec = base_case_portfolio();
    spec.n_firms = 5;
    SimConfig cfg = quick(1);
    cfg.dt = 0.01;
    PortfolioSpec calm = spec;
    calm.common.lambda0 = calm.common.eta = calm.common.sigma = 0;
    calm.idio = calm.common;
    for (double t : simulate_default_times(calm, 12.0, cfg, 0)) EXPECT_TRUE(std::isinf(t));

    PortfolioSpec fragile = spec;
    fragile.firm = {.d = 1.0, .ell = 1.0};
    // the first common event kills every survivor, so the last default is shared
    const auto times = simulate_default_times(fragile, 12.0, cfg, 3);
    for (double t : times) {
        EXPECT_TRUE(std::isfinite(t));
        EXPECT_LE(t, 12.0);
    }
    const double last = *std::max_element(times.begin(), times.end());
    EXPECT_GE(std::count(times.begin(), times.end(), last), 1);
    EXPECT_EQ(simulate_default_times(fragile, 12.0, cfg, 3), times);
}

TEST(Portfolio, MeanDefaultsMatchAnalytic)
{
    PortfolioSpec spec = base_case_portfolio();
    SimConfig cfg = quick(4000, 3);
    cfg.dt = 0.01;
    const auto hist = estimate_portfolio_distribution(spec, {4.0, 12.0}, cfg);
    for (const auto& h : hist) {
        const auto dist = defaults_distribution(spec, h.horizon, 1e-10);
        double mean = 0.0, m2 = 0.0, worst = 0.0, worst_se = 0.0;
        for (std::size_t j = 0; j < h.probability.size(); ++j) {
            mean += j * h.probability[j].mean;
            m2 += double(j) * j * h.probability[j].mean;
            worst = std::max(worst, std::abs(h.probability[j].mean - dist.pmf[j]));
            worst_se = std::max(worst_se, std::sqrt(dist.pmf[j] * (1 - dist.pmf[j]) / h.n_paths));
        }
        const double se = std::sqrt((m2 - mean * mean) / (h.n_paths - 1));
        EXPECT_NEAR(mean, dist.mean(), 3 * se) << h.horizon;
        EXPECT_LE(worst, 3 * worst_se) << h.horizon;
    }
}
