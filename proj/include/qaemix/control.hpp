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
#include <vector>

#include "qaemix/linalg.hpp"

namespace qaemix {

inline constexpr double kUnitarityTolerance = 1e-9;

/// A matrix whose construction verified max|U^dagger U - I| <= 1e-9.
class UnitaryOperator {
public:
  explicit UnitaryOperator(ComplexMatrix u);
  static UnitaryOperator identity(std::size_t dim) {
    return UnitaryOperator(ComplexMatrix::identity(dim));
  }

  std::size_t dim() const noexcept { return u_.rows(); }
  const ComplexMatrix& matrix() const noexcept { return u_; }
  UnitaryOperator adjoint() const { return UnitaryOperator(u_.adjoint()); }

private:
  ComplexMatrix u_;
};

double unitarity_defect(const ComplexMatrix& u);

/// Heisenberg chain with X/Y controls on qubits 0 and 1.
struct SpinChainSystem {
  std::size_t n_qubits = 2;
  ComplexMatrix drift;                  // H_0
  std::vector<ComplexMatrix> controls;  // H_1..H_M

  static SpinChainSystem heisenberg(std::size_t n_qubits);
  std::size_t dim() const noexcept { return drift.rows(); }
};

/// Open chain sum_i (X_i X_{i+1} + Y_i Y_{i+1} + Z_i Z_{i+1}).
ComplexMatrix heisenberg_drift(std::size_t n_qubits);
/// [X_0, Y_0, X_1, Y_1].
std::vector<ComplexMatrix> control_hamiltonians(std::size_t n_qubits);

inline constexpr std::size_t kControlChannels = 4;

/// Piecewise-constant control amplitudes: `pieces` slices of length
/// total_time/pieces, each holding one value per control channel.
class ControlSchedule {
public:
  ControlSchedule(double total_time, std::size_t pieces, std::size_t channels,
                  std::vector<double> amplitudes, double u_min = -10.0, double u_max = 10.0);

  /// All-zero amplitudes.
  static ControlSchedule zeros(double total_time, std::size_t pieces,
                               std::size_t channels = kControlChannels, double u_min = -10.0,
                               double u_max = 10.0);

  double total_time() const noexcept { return total_time_; }
  std::size_t pieces() const noexcept { return pieces_; }
  std::size_t channels() const noexcept { return channels_; }
  double dt() const noexcept { return total_time_ / static_cast<double>(pieces_); }
  double u_min() const noexcept { return u_min_; }
  double u_max() const noexcept { return u_max_; }

  /// Slice-major: amplitude(k, j) = amplitudes()[k * channels + j].
  std::span<const double> amplitudes() const noexcept { return amplitudes_; }
  double amplitude(std::size_t slice, std::size_t channel) const noexcept {
    return amplitudes_[slice * channels_ + channel];
  }

  /// Slices [first, first + count) as a schedule of duration count*dt.
  ControlSchedule slice(std::size_t first, std::size_t count) const;

private:
  double total_time_;
  std::size_t pieces_;
  std::size_t channels_;
  std::vector<double> amplitudes_;
  double u_min_;
  double u_max_;
};

/// U(T) = U_N ... U_2 U_1 with U_k = exp(-i dt (H_0 + sum_j u_j[k] H_j)).
/// Later slices multiply on the left.
UnitaryOperator propagate(const SpinChainSystem& system, const ControlSchedule& schedule);

}  // namespace qaemix
