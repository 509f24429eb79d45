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

#include "qaemix/states.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace qaemix {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require_qubits(std::size_t n_qubits, const char* what) {
  if (n_qubits < 2) {
    throw std::invalid_argument(std::string(what) + ": need at least 2 qubits, got " +
                                std::to_string(n_qubits));
  }
  if (n_qubits > 6) {
    throw std::invalid_argument(std::string(what) + ": at most 6 qubits (dimension 64)");
  }
}

}  // namespace

ComplexMatrix pauli_x() { return {{0.0, 1.0}, {1.0, 0.0}}; }
ComplexMatrix pauli_y() { return {{0.0, Complex{0.0, -1.0}}, {Complex{0.0, 1.0}, 0.0}}; }
ComplexMatrix pauli_z() { return {{1.0, 0.0}, {0.0, -1.0}}; }

ComplexMatrix embed_single(const ComplexMatrix& op, std::size_t site, std::size_t n_qubits) {
  if (site >= n_qubits) throw std::out_of_range("embed_single: site outside register");
  ComplexMatrix out = ComplexMatrix::identity(1);
  const auto id = ComplexMatrix::identity(2);
  for (std::size_t q = 0; q < n_qubits; ++q) out = tensor_product(out, q == site ? op : id);
  return out;
}

ComplexMatrix embed_pair(const ComplexMatrix& op_a, std::size_t site_a, const ComplexMatrix& op_b,
                         std::size_t site_b, std::size_t n_qubits) {
  if (site_a == site_b || site_a >= n_qubits || site_b >= n_qubits) {
    throw std::out_of_range("embed_pair: invalid sites");
  }
  ComplexMatrix out = ComplexMatrix::identity(1);
  const auto id = ComplexMatrix::identity(2);
  for (std::size_t q = 0; q < n_qubits; ++q)
    out = tensor_product(out, q == site_a ? op_a : (q == site_b ? op_b : id));
  return out;
}

ComplexMatrix ising_hamiltonian(std::size_t n_qubits) {
  require_qubits(n_qubits, "ising_hamiltonian");
  const std::size_t dim = std::size_t{1} << n_qubits;
  ComplexMatrix h(dim, dim);
  for (std::size_t j = 0; j + 1 < n_qubits; ++j) h -= embed_pair(pauli_z(), j, pauli_z(), j + 1, n_qubits);
  for (std::size_t j = 0; j < n_qubits; ++j) h -= embed_single(pauli_x(), j, n_qubits);
  return h;
}

DensityMatrix thermal_state(std::size_t n_qubits, double beta) {
  if (!std::isfinite(beta) || beta < 0.0) {
    throw std::invalid_argument("thermal_state: beta must be finite and non-negative");
  }
  const auto eig = hermitian_eigendecompose(ising_hamiltonian(n_qubits));
  const double lowest = eig.values.front();
  const double range = eig.values.back() - lowest;
  if (beta * range > 700.0) {
    throw std::overflow_error("thermal_state: beta * spectral range exceeds 700");
  }
  // Shifting by the ground energy keeps every weight in (0, 1].
  double z = 0.0;
  for (double e : eig.values) z += std::exp(-beta * (e - lowest));
  ComplexMatrix rho = hermitian_function(
      eig, [&](double e) { return Complex{std::exp(-beta * (e - lowest)) / z, 0.0}; });
  return DensityMatrix::assume_valid(std::move(rho));
}

DensityMatrix werner_state(std::size_t d, double alpha) {
  if (d < 2) throw std::invalid_argument("werner_state: subsystem dimension must be >= 2");
  if (!(alpha >= -1.0 && alpha <= 1.0)) {
    throw std::invalid_argument("werner_state: alpha must lie in [-1, 1]");
  }
  const std::size_t dim = d * d;
  const double norm = 1.0 / (static_cast<double>(dim) - static_cast<double>(d) * alpha);
  ComplexMatrix rho(dim, dim);
  for (std::size_t i = 0; i < dim; ++i) rho(i, i) = norm;
  // SWAP |kj> = |jk>, i.e. entry (k*d + j, j*d + k).
  for (std::size_t k = 0; k < d; ++k)
    for (std::size_t j = 0; j < d; ++j) rho(k * d + j, j * d + k) -= alpha * norm;
  return DensityMatrix::assume_valid(std::move(rho));
}

DensityMatrix blended_state(std::size_t d, double p0, const PureState& psi) {
  if (psi.dim() != d) {
    throw DimensionError("blended_state: |psi> has dimension " + std::to_string(psi.dim()) +
                         ", expected " + std::to_string(d));
  }
  if (!(p0 >= 0.0 && p0 <= 1.0)) throw std::invalid_argument("blended_state: p0 must lie in [0, 1]");
  ComplexMatrix rho = ComplexMatrix::outer(psi.amplitudes());
  rho *= p0;
  for (std::size_t i = 0; i < d; ++i) rho(i, i) += (1.0 - p0) / static_cast<double>(d);
  return DensityMatrix::assume_valid(std::move(rho));
}

PureState haar_random_pure(std::size_t d, std::uint64_t seed) {
  if (d < 2) throw std::invalid_argument("haar_random_pure: dimension must be >= 2");
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<Complex> amps(d);
  double norm2 = 0.0;
  for (auto& z : amps) {
    const double re = normal(gen);
    const double im = normal(gen);
    z = Complex{re, im};
    norm2 += re * re + im * im;
  }
  const double inv = 1.0 / std::sqrt(norm2);
  for (auto& z : amps) z *= inv;
  return PureState(std::move(amps));
}

std::string family_name(const StateFamilySpec& spec) {
  return std::visit(overloaded{
                        [](const ThermalFamily&) { return std::string("thermal"); },
                        [](const WernerFamily&) { return std::string("werner"); },
                        [](const BlendedFamily&) { return std::string("blended"); },
                        [](const HaarPureFamily&) { return std::string("haar_pure"); },
                        [](const MaximallyMixedFamily&) { return std::string("maximally_mixed"); },
                        [](const BasisZeroFamily&) { return std::string("basis_zero"); },
                    },
                    spec);
}

std::string family_parameter_name(const StateFamilySpec& spec) {
  return std::visit(overloaded{
                        [](const ThermalFamily&) { return std::string("beta"); },
                        [](const WernerFamily&) { return std::string("alpha"); },
                        [](const BlendedFamily&) { return std::string("p0"); },
                        [](const auto&) { return std::string(); },
                    },
                    spec);
}

double family_parameter(const StateFamilySpec& spec) {
  return std::visit(overloaded{
                        [](const ThermalFamily& f) { return f.beta; },
                        [](const WernerFamily& f) { return f.alpha; },
                        [](const BlendedFamily& f) { return f.p0; },
                        [](const auto&) { return std::numeric_limits<double>::quiet_NaN(); },
                    },
                    spec);
}

StateFamilySpec with_parameter(const StateFamilySpec& spec, double value) {
  return std::visit(overloaded{
                        [&](ThermalFamily f) -> StateFamilySpec { f.beta = value; return f; },
                        [&](WernerFamily f) -> StateFamilySpec { f.alpha = value; return f; },
                        [&](BlendedFamily f) -> StateFamilySpec { f.p0 = value; return f; },
                        [](const auto& f) -> StateFamilySpec { return f; },
                    },
                    spec);
}

std::size_t family_dimension(const StateFamilySpec& spec) {
  return std::visit(overloaded{
                        [](const ThermalFamily& f) { return std::size_t{1} << f.n_qubits; },
                        [](const WernerFamily& f) { return f.d * f.d; },
                        [](const BlendedFamily& f) { return f.d; },
                        [](const HaarPureFamily& f) { return f.dim; },
                        [](const MaximallyMixedFamily& f) { return f.dim; },
                        [](const BasisZeroFamily& f) { return f.dim; },
                    },
                    spec);
}

DensityMatrix make_state(const StateFamilySpec& spec) {
  return std::visit(
      overloaded{
          [](const ThermalFamily& f) { return thermal_state(f.n_qubits, f.beta); },
          [](const WernerFamily& f) { return werner_state(f.d, f.alpha); },
          [](const BlendedFamily& f) {
            return blended_state(f.d, f.p0, haar_random_pure(f.d, f.psi_seed));
          },
          [](const HaarPureFamily& f) { return haar_random_pure(f.dim, f.seed).density(); },
          [](const MaximallyMixedFamily& f) { return maximally_mixed(f.dim); },
          [](const BasisZeroFamily& f) { return basis_zero(f.dim); },
      },
      spec);
}

}  // namespace qaemix
