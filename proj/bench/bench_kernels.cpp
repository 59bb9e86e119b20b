// Parallel kernels against the serial reference versions.
//   ./build/bench/bench_kernels --benchmark_filter=dephase

#include <benchmark/benchmark.h>

#include <numeric>

#include "qdiscord/kernels.hpp"
#include "qdiscord/qstate.hpp"

using namespace qdiscord;

namespace {

std::vector<int> qubits(int n) { return std::vector<int>(n, 2); }

Matrix random_data(int n) { return sample_random_state(qubits(n), 1 << n, 7).data(); }

// keep the first half of the qubits
template <bool Parallel>
void BM_partial_trace(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Matrix rho = random_data(n);
  const auto dims = qubits(n);
  std::vector<int> keep(n / 2);
  std::iota(keep.begin(), keep.end(), 0);
  for (auto _ : state) {
    Matrix out = Parallel ? kernels::partial_trace(rho, dims, keep) : kernels::serial::partial_trace(rho, dims, keep);
    benchmark::DoNotOptimize(out.data());
  }
}

// Haar basis on the first two qubits
template <bool Parallel>
void BM_dephase(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Matrix rho = random_data(n);
  const auto dims = qubits(n);
  const std::vector<int> targets{0, 1};
  const Matrix w = random_unitary(4, 11);
  for (auto _ : state) {
    Matrix out = Parallel ? kernels::dephase(rho, dims, targets, w) : kernels::serial::dephase(rho, dims, targets, w);
    benchmark::DoNotOptimize(out.data());
  }
}

template <bool Parallel>
void BM_permute(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Matrix rho = random_data(n);
  const auto dims = qubits(n);
  std::vector<int> order(n);
  std::iota(order.rbegin(), order.rend(), 0);
  for (auto _ : state) {
    Matrix out = Parallel ? kernels::permute(rho, dims, order) : kernels::serial::permute(rho, dims, order);
    benchmark::DoNotOptimize(out.data());
  }
}

}  // namespace

BENCHMARK(BM_partial_trace<false>)->Name("partial_trace/serial")->DenseRange(4, 10, 2)->UseRealTime();
BENCHMARK(BM_partial_trace<true>)->Name("partial_trace/omp")->DenseRange(4, 10, 2)->UseRealTime();
BENCHMARK(BM_dephase<false>)->Name("dephase/serial")->DenseRange(4, 8, 2)->UseRealTime();
BENCHMARK(BM_dephase<true>)->Name("dephase/omp")->DenseRange(4, 8, 2)->UseRealTime();
BENCHMARK(BM_permute<false>)->Name("permute/serial")->DenseRange(4, 10, 2)->UseRealTime();
BENCHMARK(BM_permute<true>)->Name("permute/omp")->DenseRange(4, 10, 2)->UseRealTime();

BENCHMARK_MAIN();
