#include "contagion/cdo.hpp"
#include "contagion/process.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace contagion;

namespace {

const ContagionParams kBase = base_case_portfolio().common;

// E[θ^N(T)] for the no-self-excitation model: B in closed form, c by quadrature.
double no_self_pgf_oracle(const AffineNoSelfProcess& proc, double theta, double horizon)
{
    const auto& p = proc.params;
    auto b = [&](double s) {
        const double level = (1.0 - theta) / p.delta;
        return level * (1.0 - std::exp(-p.delta * s));
    };
    const double c = oracle::integrate(
        [&](double s) {
            const double bs = b(s);
            return p.delta * p.eta * bs - 0.5 * p.sigma * p.sigma * bs * bs +
                   proc.jump_rate * bs / (p.beta + bs);
        },
        0.0, horizon);
    return std::exp(-b(horizon) * p.lambda0 - c);
}

}  // namespace

TEST(MatchedModels, ShareStationaryMeanIntensity)
{
    EXPECT_DOUBLE_EQ(kBase.stationary_mean_intensity(), 2.25);
    for (auto mode : {ModelMode::dynamic_contagion, ModelMode::poisson, ModelMode::ajd_no_self})
        EXPECT_NEAR(stationary_mean_intensity(matched_process(mode, kBase)), 2.25, 1e-14);
    const auto ajd = std::get<AffineNoSelfProcess>(matched_process(ModelMode::ajd_no_self, kBase));
    EXPECT_DOUBLE_EQ(ajd.jump_rate, 2.25);
    EXPECT_EQ(ajd.params, kBase);
}

TEST(PoissonProcess, GeneratingFunction)
{
    const PoissonProcess p{2.25};
    EXPECT_DOUBLE_EQ(pgf(p, 1.0, 12.0), 1.0);
    EXPECT_NEAR(pgf(p, 0.7, 4.0), std::exp(-0.3 * 9.0), 1e-15);
}

TEST(AffineNoSelf, MatchesQuadratureOracle)
{
    const auto proc = std::get<AffineNoSelfProcess>(matched_process(ModelMode::ajd_no_self, kBase));
    for (double theta : {0.0, 0.5, 0.97})
        for (double T : {1.0, 12.0}) {
            const double expected = no_self_pgf_oracle(proc, theta, T);
            EXPECT_NEAR(pgf(proc, theta, T), expected, 1e-9 * expected) << theta << ' ' << T;
        }
    EXPECT_NEAR(pgf(proc, 1.0, 12.0), 1.0, 1e-12);
}

TEST(AffineNoSelf, NoJumpsNoDiffusionIsDeterministic)
{
    const AffineNoSelfProcess proc{{.lambda0 = 3.0, .delta = 1.2, .eta = 0.5, .sigma = 0.0, .beta = 2.0},
                                   0.0};
    const double expected = std::exp(-0.6 * oracle::deterministic_compensator(proc.params, 5.0));
    EXPECT_NEAR(pgf(proc, 0.4, 5.0), expected, 1e-10);
}

TEST(AffineNoSelf, MeanCountFromGeneratingFunction)
{
    const auto proc = std::get<AffineNoSelfProcess>(matched_process(ModelMode::ajd_no_self, kBase));
    // E[λ(t)] = λ̄ + (λ₀ − λ̄)e^{−δt} when jumps arrive exogenously
    const double T = 4.0;
    const double mean_lambda = 2.25;
    const double expected = mean_lambda * T + (kBase.lambda0 - mean_lambda) *
                                                  (1.0 - std::exp(-kBase.delta * T)) / kBase.delta;
    const double h = 1e-5;
    const double derivative = (pgf(proc, 1.0, T) - pgf(proc, 1.0 - h, T)) / h;
    EXPECT_NEAR(derivative, expected, 1e-3);
}

TEST(PgfCurve, AnyHorizonOrder)
{
    for (const CountingProcess& proc :
         {CountingProcess{kBase}, matched_process(ModelMode::poisson, kBase),
          matched_process(ModelMode::ajd_no_self, kBase)}) {
        const std::vector<double> horizons{6.0, 2.0, 12.0};
        const auto curve = pgf_curve(proc, 0.8, horizons);
        for (std::size_t i = 0; i < horizons.size(); ++i)
            EXPECT_NEAR(curve[i].real(), pgf(proc, 0.8, horizons[i]), 1e-9);
    }
}
