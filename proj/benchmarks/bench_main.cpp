#include "contagion/cdo.hpp"
#include "contagion/inversion.hpp"
#include "contagion/philox.hpp"
#include "contagion/simulation.hpp"
#include "contagion/transform.hpp"

#include <benchmark/benchmark.h>

using namespace contagion;

namespace {

const ContagionParams kBase = base_case_portfolio().common;

void BM_TransformClosedForm(benchmark::State& state)
{
    for (auto _ : state)
        benchmark::DoNotOptimize(joint_transform(kBase, 0.97, 0.0, 12.0, Method::closed_form).value);
}
BENCHMARK(BM_TransformClosedForm);

void BM_TransformOde(benchmark::State& state)
{
    for (auto _ : state) benchmark::DoNotOptimize(joint_transform(kBase, 0.97, 0.0, 12.0, Method::ode).value);
}
BENCHMARK(BM_TransformOde);

void BM_CountDistribution(benchmark::State& state)
{
    const double horizon = static_cast<double>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(count_distribution(kBase, horizon, 64, 1e-10).pmf.data());
}
BENCHMARK(BM_CountDistribution)->Arg(4)->Arg(12)->Arg(24)->Unit(benchmark::kMillisecond);

void BM_PriceBaseCase(benchmark::State& state)
{
    const auto model = validate(base_case_portfolio(), base_case_pricing());
    for (auto _ : state) benchmark::DoNotOptimize(price_cdo(model, base_case_tranches()).data());
}
BENCHMARK(BM_PriceBaseCase)->Unit(benchmark::kMillisecond);

void BM_PhiloxWords(benchmark::State& state)
{
    PhiloxStream rng(1, 2);
    for (auto _ : state) benchmark::DoNotOptimize(rng());
    state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_PhiloxWords);

void BM_SnapshotSteps(benchmark::State& state)
{
    SimConfig cfg;
    cfg.n_paths = 1000;
    cfg.dt = 1e-3;
    for (auto _ : state) benchmark::DoNotOptimize(simulate_snapshots(kBase, {4.0}, cfg).counts.data());
    state.SetItemsProcessed(state.iterations() * cfg.n_paths * 4000);
}
BENCHMARK(BM_SnapshotSteps)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
