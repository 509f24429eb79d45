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
#include "qaemix/linalg.hpp"
#include "qaemix/states.hpp"

using namespace qaemix;

namespace {

ComplexMatrix random_hermitian(std::size_t n, std::mt19937_64& gen) {
  const oracle::CMat g = oracle::gaussian(static_cast<Eigen::Index>(n),
                                          static_cast<Eigen::Index>(n), gen);
  return oracle::from_eigen(0.5 * (g + g.adjoint()));
}

ComplexMatrix random_matrix(std::size_t r, std::size_t c, std::mt19937_64& gen) {
  return oracle::from_eigen(
      oracle::gaussian(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c), gen));
}

double reconstruction_error(const ComplexMatrix& h, const HermitianEigen& eig) {
  const auto back = hermitian_function(eig, [](double l) { return Complex(l, 0.0); });
  return max_abs_diff(back, h);
}

double unitarity_defect_like(const ComplexMatrix& u) {
  const oracle::CMat m = oracle::to_eigen(u);
  return oracle::max_diff(m.adjoint() * m, oracle::CMat::Identity(m.rows(), m.cols()));
}

constexpr EigenSolver kSolvers[] = {EigenSolver::Jacobi, EigenSolver::HouseholderQL};

}  // namespace

TEST_CASE("tensor product of identities and projectors") {
  CHECK(max_abs_diff(tensor_product(ComplexMatrix::identity(2), ComplexMatrix::identity(2)),
                     ComplexMatrix::identity(4)) == 0.0);
  const double p[] = {1.0, 0.0};
  const double pp[] = {1.0, 0.0, 0.0, 0.0};
  CHECK(max_abs_diff(tensor_product(ComplexMatrix::diagonal(p), ComplexMatrix::diagonal(p)),
                     ComplexMatrix::diagonal(pp)) == 0.0);
}

TEST_CASE("tensor product matches the index definition and Eigen") {
  const auto x = pauli_x(), z = pauli_z();
  const auto xz = tensor_product(x, z);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j)
      for (std::size_t k = 0; k < 2; ++k)
        for (std::size_t l = 0; l < 2; ++l) CHECK(xz(2 * i + k, 2 * j + l) == x(i, j) * z(k, l));

  std::mt19937_64 gen(11);
  for (int trial = 0; trial < 20; ++trial) {
    const auto a = random_matrix(2 + trial % 3, 1 + trial % 4, gen);
    const auto b = random_matrix(1 + trial % 2, 3, gen);
    CHECK(oracle::max_diff(oracle::to_eigen(tensor_product(a, b)),
                           oracle::kron(oracle::to_eigen(a), oracle::to_eigen(b))) < 1e-14);
  }
}

TEST_CASE("tensor product is associative") {
  std::mt19937_64 gen(12);
  for (int trial = 0; trial < 50; ++trial) {
    const auto a = random_matrix(1 + trial % 4, 1 + (trial / 4) % 4, gen);
    const auto b = random_matrix(1 + (trial + 1) % 4, 2, gen);
    const auto c = random_matrix(2, 1 + (trial + 2) % 4, gen);
    CHECK(max_abs_diff(tensor_product(tensor_product(a, b), c),
                       tensor_product(a, tensor_product(b, c))) <= 1e-12);
  }
}

TEST_CASE("partial trace") {
  std::mt19937_64 gen(13);
  SUBCASE("product states factor") {
    for (int trial = 0; trial < 50; ++trial) {
      const std::size_t da = 1 + trial % 4, db = 1 + (trial / 4) % 4;
      const auto ra = oracle::random_state(da, gen).matrix();
      const auto rb = oracle::random_state(db, gen).matrix();
      const auto ab = tensor_product(ra, rb);
      CHECK(max_abs_diff(partial_trace(ab, da, db, Keep::A), ra) <= 1e-12);
      CHECK(max_abs_diff(partial_trace(ab, da, db, Keep::B), rb) <= 1e-12);
    }
  }
  SUBCASE("Bell state reduces to I/2") {
    const double h = 0.5;
    const ComplexMatrix bell{{h, 0, 0, h}, {0, 0, 0, 0}, {0, 0, 0, 0}, {h, 0, 0, h}};
    const double half[] = {0.5, 0.5};
    CHECK(max_abs_diff(partial_trace(bell, 2, 2, Keep::A), ComplexMatrix::diagonal(half)) < 1e-15);
    CHECK(max_abs_diff(partial_trace(bell, 2, 2, Keep::B), ComplexMatrix::diagonal(half)) < 1e-15);
  }
  SUBCASE("agrees with the sandwich oracle and keeps unit trace") {
    for (int trial = 0; trial < 30; ++trial) {
      const std::size_t da = 2 + trial % 3, db = 2 + (trial / 3) % 3;
      const auto rho = oracle::random_density(static_cast<Eigen::Index>(da * db), gen);
      const auto m = oracle::from_eigen(rho);
      const auto a = partial_trace(m, da, db, Keep::A);
      const auto b = partial_trace(m, da, db, Keep::B);
      CHECK(oracle::max_diff(oracle::to_eigen(a), oracle::trace_out_b(rho, da, db)) < 1e-14);
      CHECK(oracle::max_diff(oracle::to_eigen(b), oracle::trace_out_a(rho, da, db)) < 1e-14);
      CHECK(std::abs(a.trace() - 1.0) < 1e-12);
      CHECK(std::abs(b.trace() - 1.0) < 1e-12);
    }
  }
  SUBCASE("dimension mismatch") {
    CHECK_THROWS_AS(partial_trace(ComplexMatrix::identity(4), 2, 3, Keep::A), DimensionError);
  }
}

TEST_CASE("eigendecomposition examples") {
  for (auto solver : kSolvers) {
    CAPTURE(static_cast<int>(solver));
    const double d[] = {3.0, 1.0, 2.0};
    const auto eig = hermitian_eigendecompose(ComplexMatrix::diagonal(d), solver);
    REQUIRE(eig.values.size() == 3);
    CHECK(eig.values[0] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(eig.values[1] == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(eig.values[2] == doctest::Approx(3.0).epsilon(1e-14));

    const auto x = hermitian_eigendecompose(pauli_x(), solver);
    CHECK(x.values[0] == doctest::Approx(-1.0).epsilon(1e-14));
    CHECK(x.values[1] == doctest::Approx(1.0).epsilon(1e-14));
    // |<-|v0>| = |<+|v1>| = 1 up to phase.
    const double s = 1.0 / std::sqrt(2.0);
    CHECK(std::abs(s * x.vectors(0, 0) - s * x.vectors(1, 0)) == doctest::Approx(1.0));
    CHECK(std::abs(s * x.vectors(0, 1) + s * x.vectors(1, 1)) == doctest::Approx(1.0));
  }
}

TEST_CASE("eigendecomposition agrees with Eigen and reconstructs") {
  std::mt19937_64 gen(14);
  for (auto solver : kSolvers) {
    for (std::size_t n : {1u, 2u, 3u, 4u, 7u, 8u, 16u}) {
      for (int trial = 0; trial < 10; ++trial) {
        const auto h = random_hermitian(n, gen);
        const auto eig = hermitian_eigendecompose(h, solver);
        const auto ref = oracle::eigenvalues_vec(oracle::to_eigen(h));
        double worst = 0.0, sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
          worst = std::max(worst, std::abs(eig.values[i] - ref[i]));
          sum += eig.values[i];
          if (i > 0) CHECK(eig.values[i - 1] <= eig.values[i]);
        }
        CHECK(worst < 1e-12);
        CHECK(reconstruction_error(h, eig) <= 1e-10);
        CHECK(unitarity_defect_like(eig.vectors) <= 1e-12);
        CHECK(std::abs(h.trace().real() - sum) <= 1e-10);
      }
    }
  }
}

TEST_CASE("eigendecomposition of degenerate and zero inputs") {
  for (auto solver : kSolvers) {
    const auto zero = hermitian_eigendecompose(ComplexMatrix::zeros(5, 5), solver);
    for (double v : zero.values) CHECK(v == 0.0);
    const auto drift = hermitian_eigendecompose(
        tensor_product(pauli_x(), pauli_x()) + tensor_product(pauli_y(), pauli_y()) +
            tensor_product(pauli_z(), pauli_z()),
        solver);
    CHECK(drift.values[0] == doctest::Approx(-3.0).epsilon(1e-12));
    for (int i = 1; i < 4; ++i) CHECK(drift.values[i] == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("Hermiticity enforcement") {
  ComplexMatrix h{{1.0, 2.0}, {2.0 + 1e-12, -1.0}};
  CHECK_NOTHROW(hermitian_eigendecompose(h));
  h(1, 0) = 2.0 + 1e-6;
  CHECK_THROWS_AS(hermitian_eigendecompose(h), std::domain_error);
  CHECK_THROWS_AS(hermitian_eigendecompose(ComplexMatrix(2, 3)), DimensionError);
}

TEST_CASE("hermitian_function") {
  std::mt19937_64 gen(15);
  SUBCASE("identity map returns the input") {
    const auto h = random_hermitian(8, gen);
    CHECK(max_abs_diff(hermitian_function(h, [](double l) { return Complex(l); }), h) <= 1e-10);
  }
  SUBCASE("exp(-i pi Z) is -I") {
    const auto u = hermitian_function(pauli_z(), [](double l) {
      return std::exp(Complex(0.0, -std::numbers::pi * l));
    });
    CHECK(max_abs_diff(u, -1.0 * ComplexMatrix::identity(2)) < 1e-15);
  }
  SUBCASE("square root squares back") {
    for (int trial = 0; trial < 20; ++trial) {
      const auto rho = oracle::random_state(2 + trial % 15, gen).matrix();
      const auto r = hermitian_function(rho, [](double l) { return Complex(std::sqrt(std::max(l, 0.0))); });
      CHECK(max_abs_diff(r * r, rho) <= 1e-9);
    }
  }
  SUBCASE("exponentials are unitary") {
    for (auto solver : kSolvers) {
      for (int trial = 0; trial < 30; ++trial) {
        const auto h = random_hermitian(1 + trial % 16, gen);
        const double t = 0.1 * trial;
        const auto u = hermitian_function(
            h, [t](double l) { return std::exp(Complex(0.0, -t * l)); }, solver);
        CHECK(unitarity_defect_like(u) <= 1e-10);
        const oracle::CMat ref = (Complex(0.0, -t) * oracle::to_eigen(h)).exp();
        CHECK(oracle::max_diff(oracle::to_eigen(u), ref) < 1e-10);
      }
    }
  }
  SUBCASE("non-finite map is rejected") {
    CHECK_THROWS_AS(hermitian_function(pauli_z(), [](double l) { return Complex(std::log(l + 1.0)); }),
                    std::domain_error);
  }
}

TEST_CASE("matrix basics") {
  const ComplexMatrix a{{1.0, Complex(0, 2)}, {3.0, 4.0}};
  CHECK(a.adjoint()(0, 1) == Complex(3.0));
  CHECK(a.adjoint()(1, 0) == Complex(0, -2));
  CHECK(a.trace() == Complex(5.0));
  CHECK(hermiticity_defect(a) == doctest::Approx(std::abs(Complex(0, 2) - 3.0)));
  CHECK_THROWS_AS(a * ComplexMatrix(3, 3), DimensionError);
  CHECK_THROWS_AS(ComplexMatrix(2, 2, std::vector<Complex>(3)), DimensionError);
}
