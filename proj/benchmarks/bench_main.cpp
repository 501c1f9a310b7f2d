#include <benchmark/benchmark.h>

#include <vector>

#include "swaplab/egcomb.hpp"
#include "swaplab/lpp.hpp"
#include "swaplab/osp.hpp"
#include "swaplab/rng.hpp"
#include "swaplab/tasep.hpp"

using namespace swaplab;

static void BM_SimulateOsp(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::uint64_t s = 0;
  for (auto _ : state) {
    ClockField f(derive_key(1, s++), {1, n});
    benchmark::DoNotOptimize(simulate_osp(f, n, false).absorbing_time);
  }
}
BENCHMARK(BM_SimulateOsp)->Arg(6)->Arg(50)->Arg(200);

static void BM_PassageTable(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  std::uint64_t s = 0;
  for (auto _ : state) {
    ClockField f(derive_key(2, s++), table_window(0, d, d));
    benchmark::DoNotOptimize(passage_time_table(f, 0, d, d).at(d, d));
  }
}
BENCHMARK(BM_PassageTable)->Arg(6)->Arg(20);

static void BM_LppDp(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const LppField f = sample_field(3, d, d);
  for (auto _ : state) benchmark::DoNotOptimize(passage_time(f, {1, 1}, {d, d}));
}
BENCHMARK(BM_LppDp)->Arg(100)->Arg(500);

static void BM_EvalF(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::vector<mpq_class> x;
  for (int k = 1; k < n; ++k) x.emplace_back(3 * k + 1, k + 1);
  Permutation sigma(static_cast<std::size_t>(n - 1));
  for (int k = 0; k < n - 1; ++k) sigma[static_cast<std::size_t>(k)] = n - 1 - k;
  for (auto _ : state) benchmark::DoNotOptimize(eval_F(n, sigma, x));
}
BENCHMARK(BM_EvalF)->Arg(4)->Arg(5)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
