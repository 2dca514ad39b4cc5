// FFT lag sums vs the direct O(n^2) reference, objective evaluation cost, and
// serial vs OpenMP Monte Carlo replications.

#include <benchmark/benchmark.h>

#include <omp.h>

#include "gqarch/convolution.hpp"
#include "gqarch/likelihood.hpp"
#include "gqarch/montecarlo.hpp"
#include "gqarch/simulator.hpp"

namespace {

const gqarch::Theta kReference{0.7, 0.1, -0.2, 0.2, 0.2};

std::vector<double> returns(std::size_t n) {
  gqarch::SimConfig sim;
  sim.n = n;
  sim.seed = 7;
  return gqarch::simulate(kReference, sim).observations;
}

void BM_LagSumsFft(benchmark::State& state) {
  const auto x = returns(static_cast<std::size_t>(state.range(0)));
  const gqarch::LaggedSumKernel kernel(x);
  for (auto _ : state) benchmark::DoNotOptimize(kernel.evaluate(0.25, false));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_LagSumsFft)->RangeMultiplier(4)->Range(256, 16384)->Complexity();

void BM_LagSumsDirect(benchmark::State& state) {
  const auto x = returns(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(gqarch::weighted_sums_reference(x, 0.25, false));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_LagSumsDirect)->RangeMultiplier(4)->Range(256, 4096)->Complexity();

void BM_Objective(benchmark::State& state) {
  gqarch::SimConfig sim;
  sim.n = static_cast<std::size_t>(state.range(0));
  sim.seed = 3;
  sim.presample = true;
  const auto path = gqarch::simulate(kReference, sim);
  const gqarch::QmlObjective objective(path, gqarch::PastMode::presample());
  const bool grad = state.range(1) != 0;
  for (auto _ : state) benchmark::DoNotOptimize(objective.evaluate(kReference, grad));
}
BENCHMARK(BM_Objective)->Args({1000, 0})->Args({1000, 1})->Args({5000, 0})->Args({5000, 1});

void BM_MonteCarlo(benchmark::State& state) {
  gqarch::McDesign design;
  design.theta_grid = {kReference};
  design.n_list = {300};
  design.reps = 8;
  design.opts.starts = 1;
  design.workers = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(gqarch::run_mc(design));
}
BENCHMARK(BM_MonteCarlo)->Arg(1)->Arg(omp_get_max_threads())->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
