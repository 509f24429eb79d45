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
#include <span>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "qaemix/linalg.hpp"

namespace qaemix {

/// Raised when a matrix fails density-matrix or pure-state validation.
class InvalidStateError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Hermitian, PSD, unit-trace operator. Only obtainable through
/// validate_density() or assume_valid().
class DensityMatrix {
public:
  std::size_t dim() const noexcept { return matrix_.rows(); }
  const ComplexMatrix& matrix() const noexcept { return matrix_; }
  Complex operator()(std::size_t r, std::size_t c) const noexcept { return matrix_(r, c); }

  /// Wraps the output of a trace- and positivity-preserving map applied to a
  /// valid state (unitary conjugation, partial trace, tensor product, convex
  /// combination). No spectral check is made.
  static DensityMatrix assume_valid(ComplexMatrix m);

private:
  explicit DensityMatrix(ComplexMatrix m) : matrix_(std::move(m)) {}
  friend DensityMatrix validate_density(const ComplexMatrix& m);

  ComplexMatrix matrix_;
};

class PureState {
public:
  /// Throws InvalidStateError unless the squared norm is within 1e-10 of 1.
  explicit PureState(std::vector<Complex> amplitudes);

  std::size_t dim() const noexcept { return amplitudes_.size(); }
  std::span<const Complex> amplitudes() const noexcept { return amplitudes_; }
  DensityMatrix density() const;

private:
  std::vector<Complex> amplitudes_;
};

inline constexpr double kTraceTolerance = 1e-10;
inline constexpr double kNegativeEigenTolerance = 1e-9;
inline constexpr double kEntropyFloor = 1e-12;

/// Checks Hermiticity, unit trace and positivity. Eigenvalues in
/// [-1e-9, 0) are clamped to zero and the trace renormalized when the
/// clamped mass stays below 1e-8.
DensityMatrix validate_density(const ComplexMatrix& m);

DensityMatrix maximally_mixed(std::size_t dim);
/// |0...0><0...0|.
DensityMatrix basis_zero(std::size_t dim);

/// -sum lambda ln lambda, in nats.
double von_neumann_entropy(const DensityMatrix& rho);

enum class FidelityConvention {
  Squared,  // [Tr sqrt(sqrt(rho) sigma sqrt(rho))]^2
  Root,     // Tr sqrt(sqrt(rho) sigma sqrt(rho))
};

FidelityConvention parse_fidelity_convention(std::string_view name);
std::string_view to_string(FidelityConvention convention);

double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma,
                FidelityConvention convention = FidelityConvention::Squared);

/// S(Tr_B rho) + S(Tr_A rho) - S(rho) across the (dim_a | dim_b) cut.
double quantum_mutual_information(const DensityMatrix& rho, std::size_t dim_a,
                                  std::size_t dim_b);

/// sum_i sqrt(p_i) |i_K>|i_R> with the eigenbasis sorted by descending
/// eigenvalue and R in the computational basis. The system K is the leading
/// tensor factor of the returned d^2-dimensional state.
PureState purify(const DensityMatrix& rho);

/// Reduced state of either factor of a bipartite density.
DensityMatrix reduce(const DensityMatrix& rho, std::size_t dim_a, std::size_t dim_b, Keep keep);

}  // namespace qaemix
