// Serial reference kernels against the OpenMP kernels on the same inputs.

#include "qflow/kernels.hpp"

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

namespace {

std::vector<qflow::cplx> random_state(int n) {
  std::mt19937_64 rng(1234);
  std::normal_distribution<double> g;
  std::vector<qflow::cplx> v(std::size_t{1} << n);
  for (auto& a : v) a = {g(rng), g(rng)};
  return v;
}

const qflow::kernels::Mat2 hadamard{qflow::cplx{M_SQRT1_2}, qflow::cplx{M_SQRT1_2}, qflow::cplx{M_SQRT1_2},
                                    qflow::cplx{-M_SQRT1_2}};

void BM_apply_1q_reference(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  auto v = random_state(n);
  for (auto _ : state) {
    for (int q = 0; q < n; ++q) qflow::kernels::reference::apply_1q(v, q, hadamard);
    benchmark::DoNotOptimize(v.data());
  }
}

void BM_apply_1q_omp(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  auto v = random_state(n);
  for (auto _ : state) {
    for (int q = 0; q < n; ++q) qflow::kernels::apply_1q(v, q, hadamard);
    benchmark::DoNotOptimize(v.data());
  }
}

void BM_apply_cz_reference(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  auto v = random_state(n);
  for (auto _ : state) {
    for (int q = 0; q + 1 < n; ++q) qflow::kernels::reference::apply_cz(v, q, q + 1);
    benchmark::DoNotOptimize(v.data());
  }
}

void BM_apply_cz_omp(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  auto v = random_state(n);
  for (auto _ : state) {
    for (int q = 0; q + 1 < n; ++q) qflow::kernels::apply_cz(v, q, q + 1);
    benchmark::DoNotOptimize(v.data());
  }
}

}  // namespace

BENCHMARK(BM_apply_1q_reference)->DenseRange(10, 20, 5);
BENCHMARK(BM_apply_1q_omp)->DenseRange(10, 20, 5);
BENCHMARK(BM_apply_cz_reference)->DenseRange(10, 20, 5);
BENCHMARK(BM_apply_cz_omp)->DenseRange(10, 20, 5);

BENCHMARK_MAIN();
