// SPDX-License-Identifier: Apache-2.0
#include <benchmark/benchmark.h>

#include "dce/alloc_gp.hpp"
#include "dce/alloc_reciprocal.hpp"
#include "dce/montecarlo.hpp"

namespace {

void BM_SolveReciprocal(benchmark::State& state) {
  const auto problem = dce::ReciprocalProblem::from_params(dce::SystemParams::defaults(20.0), 0.1);
  for (auto _ : state) benchmark::DoNotOptimize(dce::solve_reciprocal(problem));
}
BENCHMARK(BM_SolveReciprocal);

void BM_GridOracleReciprocal(benchmark::State& state) {
  const auto problem = dce::ReciprocalProblem::from_params(dce::SystemParams::defaults(20.0), 0.1);
  const int resolution = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(dce::grid_oracle_reciprocal(problem, resolution));
}
BENCHMARK(BM_GridOracleReciprocal)->Arg(50)->Arg(200);

void BM_Condense(benchmark::State& state) {
  const auto problem =
      dce::NonReciprocalProblem::from_params(dce::SystemParams::defaults(20.0), 0.1);
  const dce::GpState start = dce::initial_feasible_point(problem);
  for (auto _ : state) benchmark::DoNotOptimize(dce::condense(problem, start));
}
BENCHMARK(BM_Condense)->Unit(benchmark::kMillisecond);

void BM_SimulateTraining(benchmark::State& state) {
  const dce::SystemParams params = dce::SystemParams::defaults(20.0);
  const auto alloc = state.range(0) == 0
                         ? dce::PowerAllocation::reciprocal(50.0, 400.0, 5.0)
                         : dce::PowerAllocation::non_reciprocal(100, 100, 100, 400, 5.0);
  dce::RandomStream rng(7);
  for (auto _ : state) benchmark::DoNotOptimize(dce::simulate_training(params, alloc, rng));
}
BENCHMARK(BM_SimulateTraining)->Arg(0)->Arg(1);

}  // namespace

BENCHMARK_MAIN();
