// Copyright 2026 The ctcsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Serial reference kernels against their OpenMP counterparts.

#include <benchmark/benchmark.h>
#include <omp.h>

#include <vector>

#include "ctcsim/circuit.hpp"
#include "ctcsim/ctc.hpp"
#include "ctcsim/oracle.hpp"
#include "ctcsim/qmat.hpp"

namespace {

using namespace ctcsim;
using circuit::Circuit;
using qmat::DensityMatrix;
using qmat::DimList;

DimList qubits(std::size_t n) { return DimList(std::vector<std::size_t>(n, 2)); }

// n_cr CR qubits and one CTC qubit, layered with random two-qubit gates.
Circuit layered(std::size_t n_cr, std::size_t layers) {
  const std::size_t n = n_cr + 1;
  std::vector<circuit::Gate> gates;
  std::uint64_t seed = 1;
  for (std::size_t l = 0; l < layers; ++l) {
    for (std::size_t w = l % 2; w + 1 < n; w += 2) {
      gates.push_back({"u", {w, w + 1}, oracle::random_unitary(4, seed++)});
    }
  }
  return Circuit(qubits(n_cr), qubits(1), std::move(gates));
}

void BM_PartialTraceSerial(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto m = oracle::random_density(std::size_t{1} << n, 3).matrix();
  const std::vector<std::size_t> keep{0, n - 1};
  for (auto _ : state) benchmark::DoNotOptimize(qmat::partial_trace_reference(m, qubits(n), keep));
}

void BM_PartialTraceParallel(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto m = oracle::random_density(std::size_t{1} << n, 3).matrix();
  const std::vector<std::size_t> keep{0, n - 1};
  for (auto _ : state) benchmark::DoNotOptimize(qmat::partial_trace(m, qubits(n), keep));
}

void BM_CompileUnitarySerial(benchmark::State& state) {
  const Circuit c = layered(static_cast<std::size_t>(state.range(0)), 6);
  for (auto _ : state) benchmark::DoNotOptimize(circuit::compile_unitary_reference(c));
}

void BM_CompileUnitaryParallel(benchmark::State& state) {
  const Circuit c = layered(static_cast<std::size_t>(state.range(0)), 6);
  for (auto _ : state) benchmark::DoNotOptimize(circuit::compile_unitary(c));
}

void BM_SuperoperatorSerial(benchmark::State& state) {
  const Circuit c = layered(static_cast<std::size_t>(state.range(0)), 4);
  const auto u = circuit::compile_unitary(c);
  const auto rho = oracle::random_density(c.cr_dim(), 5);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        ctc::induced_superoperator_reference(u, rho, c.cr_dims(), c.ctc_dims()));
  }
}

void BM_SuperoperatorParallel(benchmark::State& state) {
  const Circuit c = layered(static_cast<std::size_t>(state.range(0)), 4);
  const auto u = circuit::compile_unitary(c);
  const auto rho = oracle::random_density(c.cr_dim(), 5);
  for (auto _ : state) {
    benchmark::DoNotOptimize(ctc::induced_superoperator(u, rho, c.cr_dims(), c.ctc_dims()));
  }
}

// Oracle trials run in parallel; range(0) is the thread count.
void BM_OracleThreads(benchmark::State& state) {
  const Circuit c = layered(3, 4);
  const auto rho = oracle::random_density(c.cr_dim(), 7);
  const int saved = omp_get_max_threads();
  omp_set_num_threads(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(oracle::fixed_point_bruteforce(c, rho, 32));
  omp_set_num_threads(saved);
}

BENCHMARK(BM_PartialTraceSerial)->DenseRange(6, 10, 2);
BENCHMARK(BM_PartialTraceParallel)->DenseRange(6, 10, 2);
BENCHMARK(BM_CompileUnitarySerial)->DenseRange(3, 7, 2);
BENCHMARK(BM_CompileUnitaryParallel)->DenseRange(3, 7, 2);
BENCHMARK(BM_SuperoperatorSerial)->DenseRange(2, 5, 1);
BENCHMARK(BM_SuperoperatorParallel)->DenseRange(2, 5, 1);
BENCHMARK(BM_OracleThreads)->Arg(1)->Arg(2)->Arg(4)->UseRealTime();

}  // namespace

BENCHMARK_MAIN();
