#include <benchmark/benchmark.h>

#include "hillmaslov/crossings.hpp"
#include "hillmaslov/hill.hpp"
#include "hillmaslov/potential.hpp"
#include "hillmaslov/symplectic.hpp"

namespace {

constexpr double kPi = 3.14159265358979323846;

hillmaslov::HillProblem cosine_problem(int steps) {
  hillmaslov::HillProblem::Options options;
  options.integrator.steps_per_period = steps;
  return {hillmaslov::PotentialSpec::mathieu(3.2, 2.0, kPi), 0.1, options};
}

hillmaslov::HillProblem coupled_problem(int steps) {
  hillmaslov::Matrix v0(2, 2);
  v0(0, 0) = 4.0;
  v0(1, 1) = 1.0;
  v0(0, 1) = v0(1, 0) = 0.5;
  hillmaslov::HillProblem::Options options;
  options.integrator.steps_per_period = steps;
  return {hillmaslov::PotentialSpec::constant(v0, kPi), kPi / 2.0, options};
}

void BM_propagator(benchmark::State& state) {
  hillmaslov::HillProblem problem = cosine_problem(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    auto propagator = problem.propagator(kPi, 1.0);
    benchmark::DoNotOptimize(propagator.m);
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_propagator)->RangeMultiplier(4)->Range(256, 16384)->Complexity();

void BM_indicator(benchmark::State& state) {
  hillmaslov::HillProblem problem =
      state.range(0) == 1 ? cosine_problem(2048) : coupled_problem(2048);
  double lambda = 0.9;
  for (auto _ : state) {
    double value = hillmaslov::crossing_indicator(problem, lambda, kPi);
    benchmark::DoNotOptimize(value);
  }
}
BENCHMARK(BM_indicator)->Arg(1)->Arg(2);

void BM_trace_frame(benchmark::State& state) {
  hillmaslov::HillProblem problem =
      state.range(0) == 1 ? cosine_problem(2048) : coupled_problem(2048);
  for (auto _ : state) {
    hillmaslov::LagrangianFrame frame = hillmaslov::trace_frame(problem, 0.9, kPi / 2.0);
    benchmark::DoNotOptimize(frame);
  }
}
BENCHMARK(BM_trace_frame)->Arg(1)->Arg(2);

void BM_scan(benchmark::State& state) {
  hillmaslov::HillProblem problem = cosine_problem(1024);
  hillmaslov::ScanSettings settings;
  settings.grid = static_cast<int>(state.range(0));
  for (auto _ : state) {
    hillmaslov::ScanCache cache;  // fresh cache: measure the cold scan
    auto records = hillmaslov::find_crossings_lambda(problem, kPi, 0.0,
                                                     problem.lambda_max(), settings, &cache);
    benchmark::DoNotOptimize(records);
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_scan)->RangeMultiplier(2)->Range(50, 400)->Complexity()
    ->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
