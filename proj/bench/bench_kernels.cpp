// Serial reference vs OpenMP kernels on a single target qudit.
//   ./bench_kernels --benchmark_filter=apply

#include <benchmark/benchmark.h>

#include <random>

#include "smqs/kernels.hpp"
#include "smqs/qudit.hpp"

namespace {

using smqs::kernels::Amplitude;

std::vector<Amplitude> make_state(int d, int k) {
  std::size_t n = 1;
  for (int q = 0; q < k; ++q) n *= static_cast<std::size_t>(d);
  std::mt19937_64 gen(1);
  std::normal_distribution<double> normal;
  std::vector<Amplitude> v(n);
  for (auto& a : v) a = {normal(gen), normal(gen)};
  return v;
}

// Args: d, k, target
template <bool Parallel>
void BM_ApplyQft(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const int k = static_cast<int>(state.range(1));
  const auto layout = smqs::kernels::layout_for(d, k, static_cast<int>(state.range(2)));
  const auto matrix = smqs::qudit::fourier_matrix(d, false);
  auto v = make_state(d, k);
  for (auto _ : state) {
    if constexpr (Parallel)
      smqs::kernels::omp::apply_local(v, layout, matrix);
    else
      smqs::kernels::serial::apply_local(v, layout, matrix);
    benchmark::DoNotOptimize(v.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(v.size()));
}

template <bool Parallel>
void BM_DigitWeights(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const int k = static_cast<int>(state.range(1));
  const auto layout = smqs::kernels::layout_for(d, k, static_cast<int>(state.range(2)));
  const auto v = make_state(d, k);
  std::vector<double> out(static_cast<std::size_t>(d));
  for (auto _ : state) {
    if constexpr (Parallel)
      smqs::kernels::omp::digit_weights(v, layout, out);
    else
      smqs::kernels::serial::digit_weights(v, layout, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(v.size()));
}

void shapes(benchmark::internal::Benchmark* b) {
  b->Args({10, 4, 0})->Args({10, 6, 0})->Args({10, 6, 5})->Args({16, 5, 2})->Args({2, 22, 11});
}

}  // namespace

BENCHMARK(BM_ApplyQft<false>)->Name("apply_qft/serial")->Apply(shapes);
BENCHMARK(BM_ApplyQft<true>)->Name("apply_qft/omp")->Apply(shapes);
BENCHMARK(BM_DigitWeights<false>)->Name("digit_weights/serial")->Apply(shapes);
BENCHMARK(BM_DigitWeights<true>)->Name("digit_weights/omp")->Apply(shapes);

BENCHMARK_MAIN();
