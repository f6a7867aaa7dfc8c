#include <algorithm>
#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "lastmile/matrix.hpp"
#include "lastmile/scorer.hpp"
#include "lastmile/stop_stage.hpp"
#include "lastmile/tsp.hpp"
#include "lastmile/types.hpp"

using namespace lastmile;

namespace {

Matrix random_costs(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(1.0, 100.0);
  Matrix m = Matrix::square(n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j) m(i, j) = dist(rng);
  return m;
}

std::vector<std::size_t> rooted_permutation(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin() + 1, order.end(), rng);
  return order;
}

void BM_SolveExact(benchmark::State& state) {
  const Matrix costs = random_costs(static_cast<std::size_t>(state.range(0)), 1);
  for (auto _ : state) {
    Tour t = solve_exact(costs);
    benchmark::DoNotOptimize(t.cost);
  }
}
BENCHMARK(BM_SolveExact)->Arg(10)->Arg(12);

void BM_SolveAnytime(benchmark::State& state) {
  const Matrix costs = random_costs(static_cast<std::size_t>(state.range(0)), 2);
  const SolveBudget budget = SolveBudget::iterations(20000);
  for (auto _ : state) {
    Tour t = solve_anytime(costs, budget, 7);
    benchmark::DoNotOptimize(t.cost);
  }
}
BENCHMARK(BM_SolveAnytime)->Arg(30)->Arg(60);

void BM_Erp(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  const Matrix t = random_costs(n, 3);
  const std::vector<std::size_t> a = rooted_permutation(n, 4);
  const std::vector<std::size_t> b = rooted_permutation(n, 5);
  for (auto _ : state) {
    ErpResult r = erp(a, b, t);
    benchmark::DoNotOptimize(r.cost);
  }
}
BENCHMARK(BM_Erp)->Arg(30)->Arg(80);

void BM_PenaltyCost(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  RoutingInstance inst;
  inst.route_id = "bench";
  inst.station_id = "S";
  inst.stops.resize(n);
  inst.travel_times = random_costs(n, 6);
  std::mt19937_64 rng(8);
  std::uniform_int_distribution<std::size_t> rank(0, 9);
  std::vector<std::size_t> o(n, 0);
  for (std::size_t i = 1; i < n; ++i) o[i] = rank(rng);
  const WeightVector w = WeightVector::stop_default();
  for (auto _ : state) {
    Matrix c = penalty_cost(inst, o, w);
    benchmark::DoNotOptimize(c(0, n - 1));
  }
}
BENCHMARK(BM_PenaltyCost)->Arg(50)->Arg(150);

}  // namespace

BENCHMARK_MAIN();
