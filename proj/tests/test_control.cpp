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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <limits>
#include <random>

#include "oracles.hpp"
#include "qaemix/control.hpp"
#include "qaemix/states.hpp"

using namespace qaemix;

namespace {

std::vector<double> random_amplitudes(std::size_t pieces, std::mt19937_64& gen, double scale = 10.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  std::vector<double> a(pieces * kControlChannels);
  for (auto& v : a) v = u(gen);
  return a;
}

}  // namespace

TEST_CASE("Heisenberg drift") {
  const auto h = heisenberg_drift(2);
  const auto expect = tensor_product(pauli_x(), pauli_x()) + tensor_product(pauli_y(), pauli_y()) +
                      tensor_product(pauli_z(), pauli_z());
  CHECK(max_abs_diff(h, expect) == 0.0);
  CHECK(hermiticity_defect(h) == 0.0);
  const auto spec = oracle::eigenvalues_vec(oracle::to_eigen(h));
  CHECK(spec[0] == doctest::Approx(-3.0).epsilon(1e-12));
  for (int i = 1; i < 4; ++i) CHECK(spec[i] == doctest::Approx(1.0).epsilon(1e-12));
  // 2 SWAP - I
  const oracle::CMat swap_form = 2.0 * oracle::swap_operator(2) - oracle::CMat::Identity(4, 4);
  CHECK(oracle::max_diff(oracle::to_eigen(h), swap_form) < 1e-15);
  for (std::size_t n = 2; n <= 4; ++n)
    CHECK(oracle::max_diff(oracle::to_eigen(heisenberg_drift(n)), oracle::heisenberg(n)) == 0.0);
  CHECK_THROWS_AS(heisenberg_drift(1), std::invalid_argument);
}

TEST_CASE("control Hamiltonians") {
  const auto c = control_hamiltonians(2);
  REQUIRE(c.size() == kControlChannels);
  CHECK(max_abs_diff(c[0], tensor_product(pauli_x(), ComplexMatrix::identity(2))) == 0.0);
  CHECK(max_abs_diff(c[1], tensor_product(pauli_y(), ComplexMatrix::identity(2))) == 0.0);
  CHECK(max_abs_diff(c[2], tensor_product(ComplexMatrix::identity(2), pauli_x())) == 0.0);
  CHECK(max_abs_diff(c[3], tensor_product(ComplexMatrix::identity(2), pauli_y())) == 0.0);
  for (const auto& m : control_hamiltonians(4)) {
    CHECK(hermiticity_defect(m) == 0.0);
    CHECK(std::abs(m.trace()) == 0.0);
  }
  const auto anti = c[0] * c[1] + c[1] * c[0];
  CHECK(anti.max_abs() == 0.0);
  CHECK_THROWS_AS(control_hamiltonians(1), std::invalid_argument);
}

TEST_CASE("control schedule validation") {
  CHECK_THROWS_AS(ControlSchedule(1.0, 1, 4, {0, 0, 0, 11.0}), std::out_of_range);
  CHECK_THROWS_AS(ControlSchedule(1.0, 1, 4, {0, 0, std::numeric_limits<double>::quiet_NaN(), 0}),
                  std::domain_error);
  CHECK_THROWS_AS(ControlSchedule(1.0, 2, 4, {0, 0, 0, 0}), DimensionError);
  CHECK_THROWS_AS(ControlSchedule(0.0, 1, 4, {0, 0, 0, 0}), std::invalid_argument);
  const ControlSchedule s(2.0, 4, 4, std::vector<double>(16, 1.5));
  CHECK(s.dt() == 0.5);
  CHECK(s.slice(1, 2).total_time() == 1.0);
  CHECK_THROWS_AS(s.slice(3, 2), std::out_of_range);
}

TEST_CASE("UnitaryOperator validation") {
  CHECK_THROWS_AS(UnitaryOperator(ComplexMatrix{{1.0, 0.0}, {0.0, 1.1}}), std::domain_error);
  CHECK_THROWS_AS(UnitaryOperator(ComplexMatrix(2, 3)), DimensionError);
  CHECK_NOTHROW(UnitaryOperator(pauli_y()));
}

TEST_CASE("propagation") {
  const auto system = SpinChainSystem::heisenberg(2);
  std::mt19937_64 gen(41);

  SUBCASE("drift only") {
    const auto u = propagate(system, ControlSchedule::zeros(20.0, 100));
    const oracle::CMat expect = (Complex(0, -20.0) * oracle::heisenberg(2)).exp();
    CHECK(oracle::max_diff(oracle::to_eigen(u.matrix()), expect) <= 1e-10);
  }
  SUBCASE("one slice equals two equal slices") {
    const auto a = random_amplitudes(1, gen);
    std::vector<double> twice(a);
    twice.insert(twice.end(), a.begin(), a.end());
    const auto u1 = propagate(system, ControlSchedule(0.4, 1, 4, a));
    const auto u2 = propagate(system, ControlSchedule(0.4, 2, 4, twice));
    CHECK(max_abs_diff(u1.matrix(), u2.matrix()) <= 1e-10);
  }
  SUBCASE("matches the Pade exponential product") {
    for (std::size_t n : {2u, 3u, 4u}) {
      const auto sys = SpinChainSystem::heisenberg(n);
      const auto a = random_amplitudes(12, gen);
      const auto u = propagate(sys, ControlSchedule(3.0, 12, 4, a));
      CHECK(oracle::max_diff(oracle::to_eigen(u.matrix()), oracle::propagate(n, 3.0, 12, a)) <= 1e-10);
    }
  }
  SUBCASE("later slices act on the left") {
    std::vector<double> a(8, 0.0);
    a[0] = 3.0;  // slice 0: X_0
    a[5] = 2.0;  // slice 1: Y_0
    const auto u = propagate(system, ControlSchedule(1.0, 2, 4, a));
    const auto first = propagate(system, ControlSchedule(0.5, 1, 4, {3.0, 0, 0, 0}));
    const auto second = propagate(system, ControlSchedule(0.5, 1, 4, {0, 2.0, 0, 0}));
    CHECK(max_abs_diff(u.matrix(), second.matrix() * first.matrix()) <= 1e-12);
    CHECK(max_abs_diff(u.matrix(), first.matrix() * second.matrix()) > 1e-3);
  }
  SUBCASE("random schedules are unitary") {
    for (std::size_t n : {2u, 4u}) {
      const auto sys = SpinChainSystem::heisenberg(n);
      for (int trial = 0; trial < 5; ++trial) {
        const auto u = propagate(sys, ControlSchedule(20.0, 100, 4, random_amplitudes(100, gen)));
        CHECK(unitarity_defect(u.matrix()) <= 1e-9);
      }
    }
  }
  SUBCASE("splitting the schedule composes") {
    const ControlSchedule s(20.0, 100, 4, random_amplitudes(100, gen));
    const auto whole = propagate(system, s);
    const auto head = propagate(system, s.slice(0, 50));
    const auto tail = propagate(system, s.slice(50, 50));
    CHECK(max_abs_diff(whole.matrix(), tail.matrix() * head.matrix()) <= 1e-9);
  }
  SUBCASE("time reversal") {
    const std::size_t pieces = 100;
    const auto a = random_amplitudes(pieces, gen);
    std::vector<double> reversed(a.size());
    for (std::size_t k = 0; k < pieces; ++k)
      for (std::size_t j = 0; j < kControlChannels; ++j)
        reversed[k * kControlChannels + j] = -a[(pieces - 1 - k) * kControlChannels + j];
    SpinChainSystem backward = system;
    backward.drift *= Complex(-1.0);
    const auto u = propagate(system, ControlSchedule(20.0, pieces, 4, a));
    const auto v = propagate(backward, ControlSchedule(20.0, pieces, 4, reversed));
    CHECK(max_abs_diff(v.matrix() * u.matrix(), ComplexMatrix::identity(4)) <= 1e-8);
  }
  SUBCASE("channel count must match") {
    CHECK_THROWS_AS(propagate(system, ControlSchedule(1.0, 1, 3, {0, 0, 0})), DimensionError);
  }
}
