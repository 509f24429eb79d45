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

#include "qaemix/control.hpp"

#include <cmath>
#include <string>

#include "qaemix/states.hpp"

namespace qaemix {

double unitarity_defect(const ComplexMatrix& u) {
  if (!u.is_square()) throw DimensionError("unitarity_defect: matrix is not square");
  return max_abs_diff(u.adjoint() * u, ComplexMatrix::identity(u.rows()));
}

UnitaryOperator::UnitaryOperator(ComplexMatrix u) : u_(std::move(u)) {
  if (!u_.is_square() || u_.rows() == 0) throw DimensionError("UnitaryOperator: not square");
  if (!u_.all_finite()) throw std::domain_error("UnitaryOperator: non-finite entry");
  const double defect = unitarity_defect(u_);
  if (defect > kUnitarityTolerance) {
    throw std::domain_error("UnitaryOperator: unitarity defect " + std::to_string(defect));
  }
}

ComplexMatrix heisenberg_drift(std::size_t n_qubits) {
  if (n_qubits < 2) throw std::invalid_argument("heisenberg_drift: need at least 2 qubits");
  const std::size_t dim = std::size_t{1} << n_qubits;
  ComplexMatrix h(dim, dim);
  const ComplexMatrix paulis[] = {pauli_x(), pauli_y(), pauli_z()};
  for (std::size_t i = 0; i + 1 < n_qubits; ++i)
    for (const auto& p : paulis) h += embed_pair(p, i, p, i + 1, n_qubits);
  return h;
}

std::vector<ComplexMatrix> control_hamiltonians(std::size_t n_qubits) {
  if (n_qubits < 2) throw std::invalid_argument("control_hamiltonians: need at least 2 qubits");
  return {embed_single(pauli_x(), 0, n_qubits), embed_single(pauli_y(), 0, n_qubits),
          embed_single(pauli_x(), 1, n_qubits), embed_single(pauli_y(), 1, n_qubits)};
}

SpinChainSystem SpinChainSystem::heisenberg(std::size_t n_qubits) {
  return {n_qubits, heisenberg_drift(n_qubits), control_hamiltonians(n_qubits)};
}

ControlSchedule::ControlSchedule(double total_time, std::size_t pieces, std::size_t channels,
                                 std::vector<double> amplitudes, double u_min, double u_max)
    : total_time_(total_time),
      pieces_(pieces),
      channels_(channels),
      amplitudes_(std::move(amplitudes)),
      u_min_(u_min),
      u_max_(u_max) {
  if (!(total_time > 0.0) || !std::isfinite(total_time) || pieces == 0) {
    throw std::invalid_argument("ControlSchedule: need total_time > 0 and at least one piece");
  }
  if (!(u_min <= u_max)) throw std::invalid_argument("ControlSchedule: bounds are not ordered");
  if (amplitudes_.size() != pieces * channels) {
    throw DimensionError("ControlSchedule: expected " + std::to_string(pieces * channels) +
                         " amplitudes, got " + std::to_string(amplitudes_.size()));
  }
  for (double u : amplitudes_) {
    if (std::isnan(u)) throw std::domain_error("ControlSchedule: NaN amplitude");
    if (u < u_min || u > u_max) {
      throw std::out_of_range("ControlSchedule: amplitude " + std::to_string(u) +
                              " outside [" + std::to_string(u_min) + ", " +
                              std::to_string(u_max) + "]");
    }
  }
}

ControlSchedule ControlSchedule::zeros(double total_time, std::size_t pieces, std::size_t channels,
                                       double u_min, double u_max) {
  return {total_time, pieces, channels, std::vector<double>(pieces * channels, 0.0), u_min, u_max};
}

ControlSchedule ControlSchedule::slice(std::size_t first, std::size_t count) const {
  if (count == 0 || first + count > pieces_) throw std::out_of_range("ControlSchedule::slice");
  std::vector<double> amps(amplitudes_.begin() + static_cast<std::ptrdiff_t>(first * channels_),
                           amplitudes_.begin() +
                               static_cast<std::ptrdiff_t>((first + count) * channels_));
  return {dt() * static_cast<double>(count), count, channels_, std::move(amps), u_min_, u_max_};
}

UnitaryOperator propagate(const SpinChainSystem& system, const ControlSchedule& schedule) {
  const std::size_t dim = system.dim();
  if (schedule.channels() != system.controls.size()) {
    throw DimensionError("propagate: schedule has " + std::to_string(schedule.channels()) +
                         " channels, system has " + std::to_string(system.controls.size()));
  }
  for (const auto& h : system.controls) {
    if (h.rows() != dim || h.cols() != dim) throw DimensionError("propagate: control dimension");
  }

  const double dt = schedule.dt();
  ComplexMatrix u = ComplexMatrix::identity(dim);
  ComplexMatrix generator(dim, dim);
  for (std::size_t k = 0; k < schedule.pieces(); ++k) {
    generator = system.drift;
    for (std::size_t j = 0; j < system.controls.size(); ++j) {
      const double amp = schedule.amplitude(k, j);
      if (amp == 0.0) continue;
      const auto src = system.controls[j].data();
      auto dst = generator.data();
      for (std::size_t e = 0; e < src.size(); ++e) dst[e] += amp * src[e];
    }
    const auto slice = hermitian_function(
        generator, [dt](double lambda) { return std::polar(1.0, -dt * lambda); },
        EigenSolver::HouseholderQL);
    u = slice * u;
  }
  return UnitaryOperator(std::move(u));
}

}  // namespace qaemix
