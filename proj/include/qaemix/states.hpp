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

#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <variant>

#include "qaemix/linalg.hpp"
#include "qaemix/quantum_info.hpp"

namespace qaemix {

/// Single-qubit Pauli matrices.
ComplexMatrix pauli_x();
ComplexMatrix pauli_y();
ComplexMatrix pauli_z();

/// `op` acting on qubit `site` of an n-qubit register (qubit 0 leads).
ComplexMatrix embed_single(const ComplexMatrix& op, std::size_t site, std::size_t n_qubits);
/// op_a on `site_a` times op_b on `site_b`.
ComplexMatrix embed_pair(const ComplexMatrix& op_a, std::size_t site_a, const ComplexMatrix& op_b,
                         std::size_t site_b, std::size_t n_qubits);

/// Open-chain transverse-field Ising model with unit couplings:
/// H = -(sum_j Z_j Z_{j+1} + sum_j X_j).
ComplexMatrix ising_hamiltonian(std::size_t n_qubits);

/// exp(-beta H)/Tr exp(-beta H) for the Ising chain above.
DensityMatrix thermal_state(std::size_t n_qubits, double beta);

/// (I - alpha * SWAP) / (d^2 - d alpha) on C^d (x) C^d.
DensityMatrix werner_state(std::size_t d, double alpha);

/// p0 |psi><psi| + (1 - p0) I/d.
DensityMatrix blended_state(std::size_t d, double p0, const PureState& psi);

/// Normalized complex Gaussian vector; Haar-distributed and deterministic in seed.
PureState haar_random_pure(std::size_t d, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Serializable family descriptions.

struct ThermalFamily {
  std::size_t n_qubits = 2;
  double beta = 1.0;
};
struct WernerFamily {
  std::size_t d = 2;
  double alpha = 0.0;
};
struct BlendedFamily {
  std::size_t d = 4;
  double p0 = 0.5;
  std::uint64_t psi_seed = 1;  // |psi> = haar_random_pure(d, psi_seed)
};
struct HaarPureFamily {
  std::size_t dim = 4;
  std::uint64_t seed = 1;
};
struct MaximallyMixedFamily {
  std::size_t dim = 4;
};
struct BasisZeroFamily {
  std::size_t dim = 4;
};

using StateFamilySpec = std::variant<ThermalFamily, WernerFamily, BlendedFamily, HaarPureFamily,
                                     MaximallyMixedFamily, BasisZeroFamily>;

std::string family_name(const StateFamilySpec& spec);
/// Name of the continuous parameter ("beta", "alpha", "p0") or "" if none.
std::string family_parameter_name(const StateFamilySpec& spec);
/// Value of the continuous parameter, NaN if the family has none.
double family_parameter(const StateFamilySpec& spec);
/// Copy of `spec` with its continuous parameter replaced.
StateFamilySpec with_parameter(const StateFamilySpec& spec, double value);
std::size_t family_dimension(const StateFamilySpec& spec);

DensityMatrix make_state(const StateFamilySpec& spec);

}  // namespace qaemix
