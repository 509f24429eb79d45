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
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "qaemix/quantum_info.hpp"
#include "qaemix/states.hpp"

using namespace qaemix;

namespace {

const double kLn2 = std::numbers::ln2;

DensityMatrix bell() {
  const double s = 1.0 / std::sqrt(2.0);
  return PureState({s, 0.0, 0.0, s}).density();
}

DensityMatrix diag_state(std::initializer_list<double> values) {
  std::vector<double> v(values);
  return validate_density(ComplexMatrix::diagonal(v));
}

}  // namespace

TEST_CASE("validate_density") {
  CHECK_NOTHROW(validate_density(maximally_mixed(2).matrix()));
  const double bad[] = {1.5, -0.5};
  CHECK_THROWS_AS(validate_density(ComplexMatrix::diagonal(bad)), InvalidStateError);
  const double edge[] = {1.0 + 1e-10, -1e-10};
  const auto clamped = validate_density(ComplexMatrix::diagonal(edge));
  CHECK(clamped(1, 1).real() >= 0.0);
  CHECK(std::abs(clamped.matrix().trace() - 1.0) < 1e-12);
  const double half_trace[] = {0.25, 0.25};
  CHECK_THROWS_AS(validate_density(ComplexMatrix::diagonal(half_trace)), InvalidStateError);
  CHECK_THROWS_AS(validate_density(ComplexMatrix{{0.5, 0.3}, {0.0, 0.5}}), InvalidStateError);
  CHECK_THROWS_AS(validate_density(ComplexMatrix(2, 3)), InvalidStateError);
  CHECK_THROWS_AS(PureState({1.0, 1.0}), InvalidStateError);
}

TEST_CASE("entropy examples") {
  CHECK(std::abs(von_neumann_entropy(PureState({0.6, Complex(0, 0.8)}).density())) < 1e-12);
  CHECK(von_neumann_entropy(maximally_mixed(4)) == doctest::Approx(std::log(4.0)).epsilon(1e-12));
  const auto thermal = thermal_state(2, 1.0);
  CHECK(von_neumann_entropy(thermal) ==
        doctest::Approx(oracle::entropy(oracle::thermal(2, 1.0))).epsilon(1e-10));
}

TEST_CASE("entropy bounds on random states") {
  std::mt19937_64 gen(21);
  for (std::size_t dim : {2u, 4u, 16u}) {
    for (int trial = 0; trial < 1000; ++trial) {
      const long rank = 1 + trial % static_cast<int>(dim);
      const auto rho = oracle::random_state(dim, gen, rank);
      const double s = von_neumann_entropy(rho);
      CHECK(s >= -1e-9);
      CHECK(s <= std::log(static_cast<double>(dim)) + 1e-9);
    }
  }
}

TEST_CASE("entropy is unitarily invariant") {
  std::mt19937_64 gen(22);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t dim = 2 + trial % 15;
    const auto rho = oracle::random_state(dim, gen);
    const auto u = oracle::random_encoder(dim, gen);
    const auto rotated = DensityMatrix::assume_valid(conjugate(u.matrix(), rho.matrix()));
    CHECK(std::abs(von_neumann_entropy(rotated) - von_neumann_entropy(rho)) <= 1e-9);
  }
}

TEST_CASE("fidelity examples") {
  const auto zero = basis_zero(2);
  const auto one = PureState({0.0, 1.0}).density();
  CHECK(fidelity(zero, zero) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(fidelity(zero, one)) < 1e-12);
  CHECK(fidelity(zero, maximally_mixed(2)) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(fidelity(zero, maximally_mixed(2), FidelityConvention::Root) ==
        doctest::Approx(std::sqrt(0.5)).epsilon(1e-12));
  CHECK_THROWS_AS(fidelity(zero, maximally_mixed(4)), DimensionError);
  CHECK(parse_fidelity_convention("root") == FidelityConvention::Root);
  CHECK(to_string(FidelityConvention::Squared) == "squared");
  CHECK_THROWS_AS(parse_fidelity_convention("cubed"), std::invalid_argument);
}

TEST_CASE("fidelity axioms on random states") {
  std::mt19937_64 gen(23);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t dim = 2 + trial % 7;
    const auto rho = oracle::random_state(dim, gen, 1 + trial % static_cast<int>(dim));
    const auto sigma = oracle::random_state(dim, gen);
    const double f = fidelity(rho, sigma);
    CHECK(f >= -1e-12);
    CHECK(f <= 1.0 + 1e-9);
    CHECK(std::abs(f - fidelity(sigma, rho)) <= 1e-9);
    CHECK(std::abs(fidelity(rho, rho) - 1.0) <= 1e-9);
    CHECK(std::abs(f - oracle::fidelity_squared(oracle::to_eigen(rho.matrix()),
                                                oracle::to_eigen(sigma.matrix()))) <= 1e-9);

    const auto psi = oracle::gaussian(static_cast<Eigen::Index>(dim), 1, gen).normalized();
    const auto pure = PureState(std::vector<Complex>(psi.data(), psi.data() + psi.size()));
    const double expect = (psi.adjoint() * oracle::to_eigen(rho.matrix()) * psi)(0, 0).real();
    CHECK(std::abs(fidelity(rho, pure.density()) - expect) <= 1e-9);
  }
}

TEST_CASE("mutual information") {
  std::mt19937_64 gen(24);
  SUBCASE("examples") {
    const auto product = DensityMatrix::assume_valid(
        tensor_product(oracle::random_state(2, gen).matrix(), oracle::random_state(3, gen).matrix()));
    CHECK(std::abs(quantum_mutual_information(product, 2, 3)) < 1e-10);
    CHECK(quantum_mutual_information(bell(), 2, 2) == doctest::Approx(2 * kLn2).epsilon(1e-12));
    const auto werner = werner_state(2, 0.5);
    CHECK(quantum_mutual_information(werner, 2, 2) ==
          doctest::Approx(oracle::mutual_information(oracle::to_eigen(werner.matrix()), 2, 2))
              .epsilon(1e-10));
    CHECK_THROWS_AS(quantum_mutual_information(werner, 2, 3), DimensionError);
  }
  SUBCASE("non-negative on random bipartite states") {
    for (int trial = 0; trial < 1000; ++trial) {
      const std::size_t da = 2 + trial % 3, db = 2 + (trial / 3) % 3;
      const auto rho = oracle::random_state(da * db, gen, 1 + trial % 5);
      const double i = quantum_mutual_information(rho, da, db);
      CHECK(i >= -1e-9);
      if (trial % 50 == 0) {
        CHECK(std::abs(i - oracle::mutual_information(oracle::to_eigen(rho.matrix()),
                                                      static_cast<Eigen::Index>(da),
                                                      static_cast<Eigen::Index>(db))) < 1e-9);
      }
    }
  }
}

TEST_CASE("purification") {
  SUBCASE("pure input") {
    const auto psi = purify(basis_zero(2));
    REQUIRE(psi.dim() == 4);
    CHECK(std::abs(psi.amplitudes()[0]) == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("maximally mixed purifies to a maximally entangled state") {
    const auto psi = purify(maximally_mixed(2));
    const auto reduced = reduce(psi.density(), 2, 2, Keep::A);
    CHECK(max_abs_diff(reduced.matrix(), maximally_mixed(2).matrix()) <= 1e-12);
    CHECK(quantum_mutual_information(psi.density(), 2, 2) == doctest::Approx(2 * kLn2));
  }
  SUBCASE("round trip on random states") {
    std::mt19937_64 gen(25);
    for (std::size_t dim : {2u, 4u, 16u}) {
      for (int trial = 0; trial < 40; ++trial) {
        const auto rho = oracle::random_state(dim, gen, 1 + trial % static_cast<int>(dim));
        const auto psi = purify(rho);
        CHECK(psi.dim() == dim * dim);
        const auto back = reduce(psi.density(), dim, dim, Keep::A);
        CHECK(max_abs_diff(back.matrix(), rho.matrix()) <= 1e-9);
      }
    }
  }
  SUBCASE("deterministic") {
    std::mt19937_64 gen(26);
    const auto rho = oracle::random_state(4, gen);
    const auto a = purify(rho), b = purify(rho);
    for (std::size_t i = 0; i < a.dim(); ++i) CHECK(a.amplitudes()[i] == b.amplitudes()[i]);
  }
}

TEST_CASE("special states") {
  CHECK(max_abs_diff(basis_zero(4).matrix(), diag_state({1, 0, 0, 0}).matrix()) == 0.0);
  CHECK(maximally_mixed(8)(3, 3).real() == doctest::Approx(0.125));
  CHECK_THROWS_AS(maximally_mixed(0), InvalidStateError);
}
