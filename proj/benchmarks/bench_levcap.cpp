#include <cmath>

#include <benchmark/benchmark.h>

#include "levcap/solver.hpp"

namespace {

using namespace levcap;

ModelInstance fixture() {
  const MarketParams mkt{0.075, 0.07, 0.35, 0.08162};
  const auto lp = calibrate_drift(mkt, 0.2, 0.5, 9.0);
  const CostTaxSpec costs{CostTaxSpec::Variant::scaled, 0.9, 0.5, 0.0, 5.0,
                          0.0};
  return ModelInstance::make(lp, mkt, DebtSpec{50.0, 0.2}, costs);
}

void BM_scale_W(benchmark::State& state) {
  const auto inst = fixture();
  double x = 0.1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(inst.ev_r.W(x));
    x = x < 8.0 ? x + 1e-3 : 0.1;
  }
}
BENCHMARK(BM_scale_W);

void BM_K1(benchmark::State& state) {
  const auto inst = fixture();
  double B = 2.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(K1(inst, B));
    B = B < 5.0 ? B + 1e-3 : 2.0;
  }
}
BENCHMARK(BM_K1);

void BM_equity(benchmark::State& state) {
  const auto inst = fixture();
  double x = 4.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(equity(inst, x, 3.61));
    x = x < 5.5 ? x + 1e-3 : 4.0;
  }
}
BENCHMARK(BM_equity);

void BM_solve_bankruptcy_level(benchmark::State& state) {
  const auto inst = fixture();
  for (auto _ : state)
    benchmark::DoNotOptimize(solve_bankruptcy_level(inst, std::log(100.0)));
}
BENCHMARK(BM_solve_bankruptcy_level);

void BM_two_stage(benchmark::State& state) {
  const ModelSpec spec{fixture().levy,
                       MarketParams{0.075, 0.07, 0.35, 0.08162},
                       0.2,
                       CostTaxSpec{CostTaxSpec::Variant::scaled, 0.9, 0.5, 0.0,
                                   5.0, 0.0}};
  const auto grid = linspace(0.0, 100.0, 21);
  for (auto _ : state)
    benchmark::DoNotOptimize(solve_two_stage(spec, std::log(100.0), grid));
}
BENCHMARK(BM_two_stage)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
