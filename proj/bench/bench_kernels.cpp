// Copyright 2026 The qaemix Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Serial vs OpenMP kernels.

#include <benchmark/benchmark.h>
#include <omp.h>

#include <random>
#include <vector>

#include "qaemix/control.hpp"
#include "qaemix/es.hpp"
#include "qaemix/linalg.hpp"
#include "qaemix/qae.hpp"
#include "qaemix/states.hpp"

using namespace qaemix;

namespace {

constexpr std::size_t kPieces = 100;

std::vector<double> random_schedule(std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  std::vector<double> a(kPieces * kControlChannels);
  for (auto& v : a) v = u(gen);
  return a;
}

es::Objective qae_objective(std::size_t n_qubits) {
  const auto system = SpinChainSystem::heisenberg(n_qubits);
  const std::size_t n_b = n_qubits / 2;
  const QaeProblem problem(n_qubits - n_b, n_b, thermal_state(n_qubits, 1.0), 0.5);
  return [system, problem](std::span<const double> theta) {
    const ControlSchedule schedule(20.0, kPieces, kControlChannels,
                                   std::vector<double>(theta.begin(), theta.end()));
    return phi(problem, propagate(system, schedule));
  };
}

es::EsConfig population(std::size_t n_qubits) {
  es::EsConfig c;
  c.population = n_qubits <= 2 ? 40 : 50;
  c.seed = 9;
  return c;
}

void BM_GradientSerial(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto objective = qae_objective(n);
  const auto config = population(n);
  const auto theta = random_schedule(3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(es::estimate_gradient_serial(objective, theta, 0.1, 0, config));
  }
}

void BM_GradientParallel(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto objective = qae_objective(n);
  const auto config = population(n);
  const auto theta = random_schedule(3);
  omp_set_num_threads(static_cast<int>(state.range(1)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(es::estimate_gradient(objective, theta, 0.1, 0, config));
  }
  state.counters["threads"] = static_cast<double>(state.range(1));
}

void BM_Propagate(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto system = SpinChainSystem::heisenberg(n);
  const ControlSchedule schedule(20.0, kPieces, kControlChannels, random_schedule(5));
  for (auto _ : state) benchmark::DoNotOptimize(propagate(system, schedule));
}

void BM_Eigen(benchmark::State& state, EigenSolver solver) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto h = heisenberg_drift(n);
  for (auto _ : state) benchmark::DoNotOptimize(hermitian_eigendecompose(h, solver));
}

}  // namespace

BENCHMARK(BM_GradientSerial)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GradientParallel)
    ->ArgsProduct({{2, 4}, {1, 2, 4}})
    ->Unit(benchmark::kMillisecond)
    ->UseRealTime();
BENCHMARK(BM_Propagate)->Arg(2)->Arg(3)->Arg(4)->Unit(benchmark::kMicrosecond);
BENCHMARK_CAPTURE(BM_Eigen, jacobi, EigenSolver::Jacobi)->Arg(2)->Arg(3)->Arg(4);
BENCHMARK_CAPTURE(BM_Eigen, householder_ql, EigenSolver::HouseholderQL)->Arg(2)->Arg(3)->Arg(4);

BENCHMARK_MAIN();
