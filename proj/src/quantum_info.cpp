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

#include "qaemix/quantum_info.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace qaemix {

namespace {

double entropy_of_spectrum(std::span<const double> values) {
  double s = 0.0;
  for (double lambda : values) {
    if (lambda > kEntropyFloor) s -= lambda * std::log(lambda);
  }
  return s;
}

ComplexMatrix psd_sqrt(const ComplexMatrix& m) {
  return hermitian_function(m, [](double x) { return Complex{std::sqrt(std::max(x, 0.0)), 0.0}; });
}

// Lexicographic ordering of eigenvectors after fixing the phase so the first
// non-negligible component is real and positive.
std::vector<Complex> canonical_phase(const ComplexMatrix& vectors, std::size_t col) {
  const std::size_t n = vectors.rows();
  std::vector<Complex> v(n);
  for (std::size_t k = 0; k < n; ++k) v[k] = vectors(k, col);
  for (std::size_t k = 0; k < n; ++k) {
    if (std::abs(v[k]) > 1e-12) {
      const Complex phase = std::conj(v[k]) / std::abs(v[k]);
      for (auto& z : v) z *= phase;
      break;
    }
  }
  return v;
}

bool lexicographic_less(const std::vector<Complex>& a, const std::vector<Complex>& b) {
  constexpr double kTol = 1e-12;
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (std::abs(a[k].real() - b[k].real()) > kTol) return a[k].real() < b[k].real();
    if (std::abs(a[k].imag() - b[k].imag()) > kTol) return a[k].imag() < b[k].imag();
  }
  return false;
}

}  // namespace

DensityMatrix DensityMatrix::assume_valid(ComplexMatrix m) { return DensityMatrix(std::move(m)); }

PureState::PureState(std::vector<Complex> amplitudes) : amplitudes_(std::move(amplitudes)) {
  if (amplitudes_.empty()) throw InvalidStateError("PureState: empty amplitude vector");
  double norm2 = 0.0;
  for (const auto& z : amplitudes_) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
      throw InvalidStateError("PureState: non-finite amplitude");
    norm2 += std::norm(z);
  }
  if (std::abs(norm2 - 1.0) > 1e-10) {
    throw InvalidStateError("PureState: squared norm " + std::to_string(norm2) + " is not 1");
  }
}

DensityMatrix PureState::density() const {
  return DensityMatrix::assume_valid(ComplexMatrix::outer(amplitudes_));
}

DensityMatrix validate_density(const ComplexMatrix& m) {
  if (!m.is_square() || m.rows() == 0) throw InvalidStateError("density: matrix is not square");
  if (!m.all_finite()) throw InvalidStateError("density: non-finite entry");
  const double defect = hermiticity_defect(m);
  if (defect > kHermitianTolerance) {
    throw InvalidStateError("density: Hermiticity defect " + std::to_string(defect));
  }
  const double tr = m.trace().real();
  if (std::abs(tr - 1.0) > kTraceTolerance) {
    throw InvalidStateError("density: trace " + std::to_string(tr) + " differs from 1");
  }
  auto eig = hermitian_eigendecompose(m);
  if (eig.values.front() < -kNegativeEigenTolerance) {
    throw InvalidStateError("density: negative eigenvalue " + std::to_string(eig.values.front()));
  }
  double clamped = 0.0;
  for (double& lambda : eig.values) {
    if (lambda < 0.0) {
      clamped -= lambda;
      lambda = 0.0;
    }
  }
  if (clamped == 0.0) {
    // Keep the caller's entries, only symmetrized.
    ComplexMatrix sym = m;
    for (std::size_t i = 0; i < m.rows(); ++i) {
      sym(i, i) = m(i, i).real();
      for (std::size_t j = i + 1; j < m.cols(); ++j) {
        const Complex v = 0.5 * (m(i, j) + std::conj(m(j, i)));
        sym(i, j) = v;
        sym(j, i) = std::conj(v);
      }
    }
    return DensityMatrix(std::move(sym));
  }
  if (clamped >= 1e-8) {
    throw InvalidStateError("density: clamped negative mass " + std::to_string(clamped) +
                            " too large");
  }
  const double total = std::accumulate(eig.values.begin(), eig.values.end(), 0.0);
  for (double& lambda : eig.values) lambda /= total;
  // Rebuild from the clamped spectrum.
  const std::size_t n = m.rows();
  ComplexMatrix rebuilt(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      Complex s{0.0, 0.0};
      for (std::size_t k = 0; k < n; ++k)
        s += eig.vectors(i, k) * eig.values[k] * std::conj(eig.vectors(j, k));
      rebuilt(i, j) = s;
    }
  return DensityMatrix(std::move(rebuilt));
}

DensityMatrix maximally_mixed(std::size_t dim) {
  if (dim == 0) throw InvalidStateError("maximally_mixed: dimension must be positive");
  auto m = ComplexMatrix::identity(dim);
  m *= 1.0 / static_cast<double>(dim);
  return DensityMatrix::assume_valid(std::move(m));
}

DensityMatrix basis_zero(std::size_t dim) {
  if (dim == 0) throw InvalidStateError("basis_zero: dimension must be positive");
  ComplexMatrix m(dim, dim);
  m(0, 0) = 1.0;
  return DensityMatrix::assume_valid(std::move(m));
}

double von_neumann_entropy(const DensityMatrix& rho) {
  return entropy_of_spectrum(hermitian_eigendecompose(rho.matrix()).values);
}

FidelityConvention parse_fidelity_convention(std::string_view name) {
  if (name == "squared") return FidelityConvention::Squared;
  if (name == "root") return FidelityConvention::Root;
  throw std::invalid_argument("unknown fidelity convention '" + std::string(name) + "'");
}

std::string_view to_string(FidelityConvention convention) {
  return convention == FidelityConvention::Squared ? "squared" : "root";
}

double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma,
                FidelityConvention convention) {
  if (rho.dim() != sigma.dim()) {
    throw DimensionError("fidelity: dimensions " + std::to_string(rho.dim()) + " and " +
                         std::to_string(sigma.dim()) + " differ");
  }
  const ComplexMatrix s = psd_sqrt(rho.matrix());
  ComplexMatrix inner = s * sigma.matrix() * s;
  // Round-off symmetrization; the product is Hermitian analytically.
  inner = 0.5 * (inner + inner.adjoint());
  const auto eig = hermitian_eigendecompose(inner);
  // Eigenvalues below the round-off level are numerically zero; their square
  // roots would otherwise add O(sqrt(eps)) each.
  const double floor =
      static_cast<double>(rho.dim()) * std::numeric_limits<double>::epsilon();
  double root = 0.0;
  for (double lambda : eig.values) {
    if (lambda > floor) root += std::sqrt(lambda);
  }
  root = std::clamp(root, 0.0, 1.0);
  return convention == FidelityConvention::Squared ? root * root : root;
}

DensityMatrix reduce(const DensityMatrix& rho, std::size_t dim_a, std::size_t dim_b, Keep keep) {
  return DensityMatrix::assume_valid(partial_trace(rho.matrix(), dim_a, dim_b, keep));
}

double quantum_mutual_information(const DensityMatrix& rho, std::size_t dim_a,
                                  std::size_t dim_b) {
  if (rho.dim() != dim_a * dim_b) {
    throw DimensionError("quantum_mutual_information: state dimension " +
                         std::to_string(rho.dim()) + " is not " + std::to_string(dim_a) + "*" +
                         std::to_string(dim_b));
  }
  const double s_a = von_neumann_entropy(reduce(rho, dim_a, dim_b, Keep::A));
  const double s_b = von_neumann_entropy(reduce(rho, dim_a, dim_b, Keep::B));
  return s_a + s_b - von_neumann_entropy(rho);
}

PureState purify(const DensityMatrix& rho) {
  const std::size_t d = rho.dim();
  const auto eig = hermitian_eigendecompose(rho.matrix());

  struct Entry {
    double p;
    std::vector<Complex> v;
  };
  std::vector<Entry> entries;
  entries.reserve(d);
  for (std::size_t i = 0; i < d; ++i)
    entries.push_back({std::max(eig.values[i], 0.0), canonical_phase(eig.vectors, i)});
  std::stable_sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
    if (std::abs(a.p - b.p) > 1e-12) return a.p > b.p;
    return lexicographic_less(a.v, b.v);
  });

  const double total =
      std::accumulate(entries.begin(), entries.end(), 0.0,
                      [](double acc, const Entry& e) { return acc + e.p; });
  std::vector<Complex> psi(d * d, Complex{0.0, 0.0});
  for (std::size_t r = 0; r < d; ++r) {
    const double amp = std::sqrt(entries[r].p / total);
    for (std::size_t k = 0; k < d; ++k) psi[k * d + r] = amp * entries[r].v[k];
  }
  return PureState(std::move(psi));
}

}  // namespace qaemix
