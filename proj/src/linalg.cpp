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

#include "qaemix/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace qaemix {

namespace {

void require_same_shape(const ComplexMatrix& a, const ComplexMatrix& b, const char* what) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionError(std::string(what) + ": shape mismatch " + std::to_string(a.rows()) +
                         "x" + std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) +
                         "x" + std::to_string(b.cols()));
  }
}

void require_finite(const ComplexMatrix& m, const char* what) {
  if (!m.all_finite()) throw std::domain_error(std::string(what) + ": non-finite entry");
}

}  // namespace

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, Complex{0.0, 0.0}) {}

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
  if (data_.size() != rows_ * cols_) {
    throw DimensionError("ComplexMatrix: entry count " + std::to_string(data_.size()) +
                         " does not match " + std::to_string(rows_) + "x" +
                         std::to_string(cols_));
  }
  require_finite(*this, "ComplexMatrix");
}

ComplexMatrix::ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  data_.reserve(rows_ * cols_);
  for (const auto& row : rows) {
    if (row.size() != cols_) throw DimensionError("ComplexMatrix: ragged initializer");
    data_.insert(data_.end(), row.begin(), row.end());
  }
  require_finite(*this, "ComplexMatrix");
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
  ComplexMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const double> values) {
  ComplexMatrix m(values.size(), values.size());
  for (std::size_t i = 0; i < values.size(); ++i) m(i, i) = values[i];
  return m;
}

ComplexMatrix ComplexMatrix::outer(std::span<const Complex> v) {
  const std::size_t n = v.size();
  ComplexMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m(i, j) = v[i] * std::conj(v[j]);
  return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix out(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) out(j, i) = std::conj((*this)(i, j));
  return out;
}

Complex ComplexMatrix::trace() const {
  if (!is_square()) throw DimensionError("trace: matrix is not square");
  Complex t{0.0, 0.0};
  for (std::size_t i = 0; i < rows_; ++i) t += (*this)(i, i);
  return t;
}

double ComplexMatrix::max_abs() const noexcept {
  double m = 0.0;
  for (const auto& z : data_) m = std::max(m, std::abs(z));
  return m;
}

bool ComplexMatrix::all_finite() const noexcept {
  return std::all_of(data_.begin(), data_.end(), [](const Complex& z) {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
  });
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& other) {
  require_same_shape(*this, other, "operator+=");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& other) {
  require_same_shape(*this, other, "operator-=");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(Complex scale) noexcept {
  for (auto& z : data_) z *= scale;
  return *this;
}

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
ComplexMatrix operator*(Complex scale, ComplexMatrix m) { return m *= scale; }
ComplexMatrix operator*(ComplexMatrix m, Complex scale) { return m *= scale; }

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.rows()) {
    throw DimensionError("operator*: inner dimensions " + std::to_string(a.cols()) + " and " +
                         std::to_string(b.rows()) + " differ");
  }
  const std::size_t n = a.rows(), m = a.cols(), p = b.cols();
  ComplexMatrix out(n, p);
  const auto lhs = a.data();
  const auto rhs = b.data();
  auto dst = out.data();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < m; ++k) {
      const Complex aik = lhs[i * m + k];
      if (aik == Complex{0.0, 0.0}) continue;
      for (std::size_t j = 0; j < p; ++j) dst[i * p + j] += aik * rhs[k * p + j];
    }
  }
  return out;
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_shape(a, b, "max_abs_diff");
  double m = 0.0;
  const auto x = a.data();
  const auto y = b.data();
  for (std::size_t i = 0; i < x.size(); ++i) m = std::max(m, std::abs(x[i] - y[i]));
  return m;
}

double hermiticity_defect(const ComplexMatrix& h) {
  if (!h.is_square()) throw DimensionError("hermiticity_defect: matrix is not square");
  double m = 0.0;
  for (std::size_t i = 0; i < h.rows(); ++i)
    for (std::size_t j = i; j < h.cols(); ++j)
      m = std::max(m, std::abs(h(i, j) - std::conj(h(j, i))));
  return m;
}

ComplexMatrix conjugate(const ComplexMatrix& a, const ComplexMatrix& m) {
  return a * m * a.adjoint();
}

ComplexMatrix tensor_product(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_finite(a, "tensor_product");
  require_finite(b, "tensor_product");
  const std::size_t ar = a.rows(), ac = a.cols(), br = b.rows(), bc = b.cols();
  ComplexMatrix out(ar * br, ac * bc);
  for (std::size_t i = 0; i < ar; ++i)
    for (std::size_t j = 0; j < ac; ++j) {
      const Complex aij = a(i, j);
      for (std::size_t k = 0; k < br; ++k)
        for (std::size_t l = 0; l < bc; ++l) out(i * br + k, j * bc + l) = aij * b(k, l);
    }
  return out;
}

ComplexMatrix partial_trace(const ComplexMatrix& rho, std::size_t dim_a, std::size_t dim_b,
                            Keep keep) {
  if (!rho.is_square() || rho.rows() != dim_a * dim_b) {
    throw DimensionError("partial_trace: operator is " + std::to_string(rho.rows()) + "x" +
                         std::to_string(rho.cols()) + ", expected square of side " +
                         std::to_string(dim_a * dim_b));
  }
  if (keep == Keep::A) {
    ComplexMatrix out(dim_a, dim_a);
    for (std::size_t i = 0; i < dim_a; ++i)
      for (std::size_t j = 0; j < dim_a; ++j) {
        Complex s{0.0, 0.0};
        for (std::size_t b = 0; b < dim_b; ++b) s += rho(i * dim_b + b, j * dim_b + b);
        out(i, j) = s;
      }
    return out;
  }
  ComplexMatrix out(dim_b, dim_b);
  for (std::size_t i = 0; i < dim_b; ++i)
    for (std::size_t j = 0; j < dim_b; ++j) {
      Complex s{0.0, 0.0};
      for (std::size_t a = 0; a < dim_a; ++a) s += rho(a * dim_b + i, a * dim_b + j);
      out(i, j) = s;
    }
  return out;
}

namespace {

HermitianEigen jacobi_eigen(std::vector<Complex> a, std::size_t n) {
  // vt holds V transposed so that both rotation updates walk rows.
  std::vector<Complex> vt(n * n, Complex{0.0, 0.0});
  for (std::size_t i = 0; i < n; ++i) vt[i * n + i] = 1.0;

  double total = 0.0;
  for (const auto& z : a) total += std::norm(z);
  const double threshold = 1e-32 * std::max(total, 1e-300);

  constexpr int kMaxSweeps = 100;
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += std::norm(a[p * n + q]);
    if (off <= threshold) break;
    // Early sweeps only rotate the large elements.
    const double skip_below = sweep < 3 ? 0.2 * off / static_cast<double>(n * n) : 0.0;

    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const Complex apq = a[p * n + q];
        const double mag2 = std::norm(apq);
        if (mag2 == 0.0 || mag2 < skip_below) continue;
        const double mag = std::sqrt(mag2);
        const double app = a[p * n + p].real();
        const double aqq = a[q * n + q].real();
        // Rotations that cannot move the diagonal at double precision.
        if (sweep > 3 && std::abs(app) + 1e3 * mag == std::abs(app) &&
            std::abs(aqq) + 1e3 * mag == std::abs(aqq)) {
          a[p * n + q] = 0.0;
          a[q * n + p] = 0.0;
          continue;
        }
        const Complex phase = apq / mag;  // e^{i phi}
        const double tau = (aqq - app) / (2.0 * mag);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        const Complex sp = s * phase;             // s e^{i phi}
        const Complex sp_conj = std::conj(sp);    // s e^{-i phi}

        // J_pp = J_qq = c, J_pq = s e^{i phi}, J_qp = -s e^{-i phi}. Rows p, q of
        // J^dagger A J off the (p, q) block equal rows of J^dagger A; columns
        // follow by Hermiticity.
        Complex* row_p = &a[p * n];
        Complex* row_q = &a[q * n];
        for (std::size_t k = 0; k < n; ++k) {
          if (k == p || k == q) continue;
          const Complex apk = row_p[k];
          const Complex aqk = row_q[k];
          const Complex np = c * apk - sp * aqk;
          const Complex nq = sp_conj * apk + c * aqk;
          row_p[k] = np;
          row_q[k] = nq;
          a[k * n + p] = std::conj(np);
          a[k * n + q] = std::conj(nq);
        }
        row_p[q] = 0.0;
        row_q[p] = 0.0;
        row_p[p] = app - t * mag;
        row_q[q] = aqq + t * mag;

        // V <- V J, applied to the transposed storage.
        Complex* vp = &vt[p * n];
        Complex* vq = &vt[q * n];
        for (std::size_t k = 0; k < n; ++k) {
          const Complex vkp = vp[k];
          const Complex vkq = vq[k];
          vp[k] = c * vkp - sp_conj * vkq;
          vq[k] = sp * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    return a[i * n + i].real() < a[j * n + j].real();
  });

  HermitianEigen out{std::vector<double>(n), ComplexMatrix(n, n)};
  for (std::size_t col = 0; col < n; ++col) {
    const std::size_t src = order[col];
    out.values[col] = a[src * n + src].real();
    for (std::size_t k = 0; k < n; ++k) out.vectors(k, col) = vt[src * n + k];
  }
  return out;
}

// Householder reduction to a complex tridiagonal, a diagonal phase change to
// make it real, then implicit QL with Wilkinson-style shifts.
HermitianEigen householder_ql_eigen(std::vector<Complex> a, std::size_t n) {
  std::vector<Complex> q(n * n, Complex{0.0, 0.0});
  for (std::size_t i = 0; i < n; ++i) q[i * n + i] = 1.0;
  std::vector<Complex> v(n), p(n);

  for (std::size_t k = 0; k + 2 < n; ++k) {
    const std::size_t m = n - k - 1;  // length of the column below the diagonal
    Complex* x = &v[k + 1];
    double tail = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      x[i] = a[(k + 1 + i) * n + k];
      if (i > 0) tail += std::norm(x[i]);
    }
    if (tail == 0.0) continue;
    const double alpha = std::sqrt(std::norm(x[0]) + tail);
    const double x0 = std::abs(x[0]);
    const Complex phase = x0 == 0.0 ? Complex{1.0, 0.0} : x[0] / x0;
    x[0] += phase * alpha;
    double vnorm2 = 0.0;
    for (std::size_t i = 0; i < m; ++i) vnorm2 += std::norm(x[i]);
    const double beta = 2.0 / vnorm2;

    // Trailing block B <- H B H with H = I - beta v v^dagger.
    for (std::size_t i = 0; i < m; ++i) {
      Complex s{0.0, 0.0};
      const Complex* row = &a[(k + 1 + i) * n + k + 1];
      for (std::size_t j = 0; j < m; ++j) s += row[j] * x[j];
      p[i] = beta * s;
    }
    Complex vp{0.0, 0.0};
    for (std::size_t i = 0; i < m; ++i) vp += std::conj(x[i]) * p[i];
    const Complex half = 0.5 * beta * vp;
    for (std::size_t i = 0; i < m; ++i) p[i] -= half * x[i];  // p is now w
    for (std::size_t i = 0; i < m; ++i) {
      Complex* row = &a[(k + 1 + i) * n + k + 1];
      for (std::size_t j = 0; j < m; ++j)
        row[j] -= x[i] * std::conj(p[j]) + p[i] * std::conj(x[j]);
    }
    const Complex sub = -phase * alpha;
    a[(k + 1) * n + k] = sub;
    a[k * n + k + 1] = std::conj(sub);
    for (std::size_t i = 1; i < m; ++i) {
      a[(k + 1 + i) * n + k] = 0.0;
      a[k * n + k + 1 + i] = 0.0;
    }

    // Q <- Q H.
    for (std::size_t r = 0; r < n; ++r) {
      Complex* row = &q[r * n + k + 1];
      Complex s{0.0, 0.0};
      for (std::size_t j = 0; j < m; ++j) s += row[j] * x[j];
      s *= beta;
      for (std::size_t j = 0; j < m; ++j) row[j] -= s * std::conj(x[j]);
    }
  }

  // Real symmetric tridiagonal D^dagger T D; fold D into Q.
  std::vector<double> d(n), e(n, 0.0);
  Complex running{1.0, 0.0};
  std::vector<Complex> phases(n);
  phases[0] = running;
  for (std::size_t i = 0; i < n; ++i) d[i] = a[i * n + i].real();
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const Complex sub = a[(i + 1) * n + i];
    const double mag = std::abs(sub);
    if (mag != 0.0) running *= sub / mag;
    phases[i + 1] = running;
    e[i] = mag;
  }
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t j = 0; j < n; ++j) q[r * n + j] *= phases[j];

  // zt holds the rotation accumulator transposed.
  std::vector<double> zt(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) zt[i * n + i] = 1.0;
  constexpr int kMaxQlIterations = 60;
  const double eps = std::numeric_limits<double>::epsilon();
  const auto last = static_cast<std::ptrdiff_t>(n) - 1;
  for (std::ptrdiff_t l = 0; l <= last; ++l) {
    int iterations = 0;
    std::ptrdiff_t m = l;
    do {
      for (m = l; m < last; ++m) {
        const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
        if (std::abs(e[m]) <= eps * dd) break;
      }
      if (m == l) break;
      if (iterations++ == kMaxQlIterations) {
        throw std::runtime_error("hermitian_eigendecompose: QL iteration did not converge");
      }
      double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
      double r = std::sqrt(g * g + 1.0);
      g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
      double s = 1.0, c = 1.0, shift = 0.0;
      std::ptrdiff_t i = m - 1;
      bool underflow = false;
      for (; i >= l; --i) {
        const double f = s * e[i];
        const double b = c * e[i];
        r = std::sqrt(f * f + g * g);
        e[i + 1] = r;
        if (r == 0.0) {
          d[i + 1] -= shift;
          e[m] = 0.0;
          underflow = true;
          break;
        }
        s = f / r;
        c = g / r;
        g = d[i + 1] - shift;
        r = (d[i] - g) * s + 2.0 * c * b;
        shift = s * r;
        d[i + 1] = g + shift;
        g = c * r - b;
        double* zi = &zt[i * n];
        double* zi1 = &zt[(i + 1) * n];
        for (std::size_t k = 0; k < n; ++k) {
          const double zk1 = zi1[k];
          zi1[k] = s * zi[k] + c * zk1;
          zi[k] = c * zi[k] - s * zk1;
        }
      }
      if (underflow) continue;
      d[l] -= shift;
      e[l] = g;
      e[m] = 0.0;
    } while (m != l);
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return d[i] < d[j]; });

  HermitianEigen out{std::vector<double>(n), ComplexMatrix(n, n)};
  for (std::size_t col = 0; col < n; ++col) {
    const std::size_t src = order[col];
    out.values[col] = d[src];
    const double* z = &zt[src * n];
    for (std::size_t r = 0; r < n; ++r) {
      Complex s{0.0, 0.0};
      const Complex* qrow = &q[r * n];
      for (std::size_t j = 0; j < n; ++j) s += qrow[j] * z[j];
      out.vectors(r, col) = s;
    }
  }
  return out;
}

}  // namespace

HermitianEigen hermitian_eigendecompose(const ComplexMatrix& h, EigenSolver solver) {
  if (!h.is_square()) throw DimensionError("hermitian_eigendecompose: matrix is not square");
  require_finite(h, "hermitian_eigendecompose");
  const double defect = hermiticity_defect(h);
  if (defect > kHermitianTolerance) {
    throw std::domain_error("hermitian_eigendecompose: Hermiticity defect " +
                            std::to_string(defect) + " exceeds tolerance");
  }
  const std::size_t n = h.rows();
  std::vector<Complex> a(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    a[i * n + i] = h(i, i).real();
    for (std::size_t j = i + 1; j < n; ++j) {
      const Complex v = 0.5 * (h(i, j) + std::conj(h(j, i)));
      a[i * n + j] = v;
      a[j * n + i] = std::conj(v);
    }
  }
  if (solver == EigenSolver::HouseholderQL) return householder_ql_eigen(std::move(a), n);
  return jacobi_eigen(std::move(a), n);
}

ComplexMatrix hermitian_function(const HermitianEigen& eig,
                                 const std::function<Complex(double)>& f) {
  const std::size_t n = eig.values.size();
  std::vector<Complex> fv(n);
  for (std::size_t i = 0; i < n; ++i) {
    fv[i] = f(eig.values[i]);
    if (!std::isfinite(fv[i].real()) || !std::isfinite(fv[i].imag())) {
      throw std::domain_error("hermitian_function: f is not finite at eigenvalue " +
                              std::to_string(eig.values[i]));
    }
  }
  const ComplexMatrix& vec = eig.vectors;
  ComplexMatrix scaled(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) scaled(i, k) = vec(i, k) * fv[k];
  ComplexMatrix out(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      Complex s{0.0, 0.0};
      for (std::size_t k = 0; k < n; ++k) s += scaled(i, k) * std::conj(vec(j, k));
      out(i, j) = s;
    }
  return out;
}

ComplexMatrix hermitian_function(const ComplexMatrix& h,
                                 const std::function<Complex(double)>& f, EigenSolver solver) {
  return hermitian_function(hermitian_eigendecompose(h, solver), f);
}

}  // namespace qaemix
