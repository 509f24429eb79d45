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

#include <complex>
#include <cstddef>
#include <functional>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <vector>

namespace qaemix {

using Complex = std::complex<double>;

/// Thrown when operand shapes do not agree.
class DimensionError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Dense complex matrix, row-major.
///
/// Tensor products everywhere in the library put the first operand on the
/// slow (leading) index, so qubit 0 is the most significant bit of a basis
/// index.
class ComplexMatrix {
public:
  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols);
  ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries);
  ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows);

  static ComplexMatrix identity(std::size_t n);
  static ComplexMatrix zeros(std::size_t rows, std::size_t cols) { return {rows, cols}; }
  static ComplexMatrix diagonal(std::span<const double> values);
  /// |v><v| for a column vector v.
  static ComplexMatrix outer(std::span<const Complex> v);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool is_square() const noexcept { return rows_ == cols_; }

  Complex& operator()(std::size_t r, std::size_t c) noexcept { return data_[r * cols_ + c]; }
  const Complex& operator()(std::size_t r, std::size_t c) const noexcept {
    return data_[r * cols_ + c];
  }

  std::span<Complex> data() noexcept { return data_; }
  std::span<const Complex> data() const noexcept { return data_; }

  ComplexMatrix adjoint() const;
  Complex trace() const;
  /// Largest |entry|.
  double max_abs() const noexcept;
  bool all_finite() const noexcept;

  ComplexMatrix& operator+=(const ComplexMatrix& other);
  ComplexMatrix& operator-=(const ComplexMatrix& other);
  ComplexMatrix& operator*=(Complex scale) noexcept;

private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Complex> data_;
};

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator*(Complex scale, ComplexMatrix m);
ComplexMatrix operator*(ComplexMatrix m, Complex scale);

/// max |a - b| over entries; shapes must agree.
double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);

/// max |H - H^dagger|.
double hermiticity_defect(const ComplexMatrix& h);

/// a * m * a^dagger.
ComplexMatrix conjugate(const ComplexMatrix& a, const ComplexMatrix& m);

/// Kronecker product; `a` occupies the slow index.
ComplexMatrix tensor_product(const ComplexMatrix& a, const ComplexMatrix& b);

enum class Keep { A, B };

/// Reduce a (dim_a*dim_b)-square operator onto one factor. Subsystem A is
/// the leading tensor factor.
ComplexMatrix partial_trace(const ComplexMatrix& rho, std::size_t dim_a, std::size_t dim_b,
                            Keep keep);

struct HermitianEigen {
  std::vector<double> values;  // ascending
  ComplexMatrix vectors;       // columns are eigenvectors
};

inline constexpr double kHermitianTolerance = 1e-10;

/// Jacobi is cyclic complex Jacobi and the default everywhere. HouseholderQL
/// (tridiagonal reduction plus implicit QL) is several times cheaper at
/// dimension 16 and is what the propagator uses per time slice.
enum class EigenSolver { Jacobi, HouseholderQL };

/// Inputs whose Hermiticity defect is below kHermitianTolerance are
/// symmetrized first; anything larger throws.
HermitianEigen hermitian_eigendecompose(const ComplexMatrix& h,
                                        EigenSolver solver = EigenSolver::Jacobi);

/// V diag(f(lambda)) V^dagger. Throws std::domain_error if f is not finite on
/// the spectrum.
ComplexMatrix hermitian_function(const ComplexMatrix& h,
                                 const std::function<Complex(double)>& f,
                                 EigenSolver solver = EigenSolver::Jacobi);
ComplexMatrix hermitian_function(const HermitianEigen& eig,
                                 const std::function<Complex(double)>& f);

}  // namespace qaemix
