#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "invfrac/discrete.hpp"
#include "invfrac/harness.hpp"
#include "invfrac/material.hpp"
#include "invfrac/projection.hpp"
#include "invfrac/solver.hpp"

using namespace invfrac;

namespace {

std::vector<double> noise(std::size_t n, double centre, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  std::vector<double> v(n);
  for (auto& x : v) x = centre + u(rng);
  return v;
}

void BM_CWstar(benchmark::State& state) {
  const auto lj = builtin_lj();
  for (auto _ : state) benchmark::DoNotOptimize(c_wstar(lj, 1e-10).value);
}
BENCHMARK(BM_CWstar);

void BM_EnergyE(benchmark::State& state) {
  const auto lj = builtin_lj();
  const auto H = project_H(noise(4001, 1.0 / 1.4, 1), 1.4);
  for (auto _ : state) benchmark::DoNotOptimize(eval_E_eps(H, 0.01, lj));
}
BENCHMARK(BM_EnergyE);

void BM_GradientE(benchmark::State& state) {
  const auto lj = builtin_lj();
  const auto H = project_H(noise(4001, 1.0 / 1.4, 2), 1.4);
  for (auto _ : state) benchmark::DoNotOptimize(grad_E_eps(H, 0.01, lj));
}
BENCHMARK(BM_GradientE);

void BM_EnergyGradientV(benchmark::State& state) {
  const auto lj = builtin_lj();
  auto s = noise(4000, 1.0 / 1.5, 3);
  for (auto& x : s) x = std::abs(x);
  std::vector<double> g;
  for (auto _ : state) benchmark::DoNotOptimize(eval_V_eps_slopes(s, 1.5, 0.01, 200.0, lj, &g));
}
BENCHMARK(BM_EnergyGradientV);

void BM_ProjectH(benchmark::State& state) {
  const auto raw = noise(static_cast<std::size_t>(state.range(0)) + 1, 0.7, 4);
  for (auto _ : state) benchmark::DoNotOptimize(project_H(raw, 1.4));
}
BENCHMARK(BM_ProjectH)->Arg(1000)->Arg(4000);

void BM_Projecth(benchmark::State& state) {
  std::vector<double> raw(static_cast<std::size_t>(state.range(0)) + 1);
  const auto n = noise(raw.size(), 0.0, 5);
  for (std::size_t j = 0; j < raw.size(); ++j) {
    raw[j] = static_cast<double>(j) / static_cast<double>(raw.size() - 1) + 0.05 * n[j];
  }
  for (auto _ : state) benchmark::DoNotOptimize(project_h(raw, 1.5));
}
BENCHMARK(BM_Projecth)->Arg(1000)->Arg(4000);

void BM_CrackScan(benchmark::State& state) {
  const auto lj = builtin_lj();
  for (auto _ : state) benchmark::DoNotOptimize(crack_scan(lj, 1.0, 2.0, 0.01, 200.0));
}
BENCHMARK(BM_CrackScan);

void BM_MinimizeE(benchmark::State& state) {
  const auto lj = builtin_lj();
  SolveSettings s;
  s.lambda = 1.4;
  s.epsilon = 0.02;
  s.grid = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(minimize(lj, s).energy);
}
BENCHMARK(BM_MinimizeE)->Arg(1000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
