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

// Independent reference implementations for tests. Everything here goes
// through Eigen so that no check reuses the library's own numerics.

#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <string>
#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>
#include <vector>

#include "qaemix/control.hpp"
#include "qaemix/linalg.hpp"
#include "qaemix/quantum_info.hpp"

namespace oracle {

using CMat = Eigen::MatrixXcd;
using Cplx = std::complex<double>;

inline CMat to_eigen(const qaemix::ComplexMatrix& m) {
  CMat out(static_cast<Eigen::Index>(m.rows()), static_cast<Eigen::Index>(m.cols()));
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) out(r, c) = m(r, c);
  return out;
}

inline qaemix::ComplexMatrix from_eigen(const CMat& m) {
  qaemix::ComplexMatrix out(static_cast<std::size_t>(m.rows()), static_cast<std::size_t>(m.cols()));
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) out(r, c) = m(r, c);
  return out;
}

inline double max_diff(const CMat& a, const CMat& b) { return (a - b).cwiseAbs().maxCoeff(); }

inline Eigen::VectorXd eigenvalues(const CMat& h) {
  Eigen::SelfAdjointEigenSolver<CMat> solver(h, Eigen::EigenvaluesOnly);
  return solver.eigenvalues();  // ascending
}

inline std::vector<double> eigenvalues_vec(const CMat& h) {
  const auto v = eigenvalues(h);
  return {v.data(), v.data() + v.size()};
}

inline CMat gaussian(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& gen) {
  std::normal_distribution<double> n;
  CMat g(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index c = 0; c < cols; ++c) g(r, c) = Cplx(n(gen), n(gen));
  return g;
}

/// G G^dagger / Tr with a dim x rank Ginibre G.
inline CMat random_density(Eigen::Index dim, std::mt19937_64& gen, Eigen::Index rank = -1) {
  const CMat g = gaussian(dim, rank < 0 ? dim : rank, gen);
  CMat rho = g * g.adjoint();
  rho /= rho.trace().real();
  return 0.5 * (rho + rho.adjoint());
}

inline qaemix::DensityMatrix random_state(std::size_t dim, std::mt19937_64& gen, long rank = -1) {
  return qaemix::validate_density(
      from_eigen(random_density(static_cast<Eigen::Index>(dim), gen, rank)));
}

/// Haar unitary: QR of a Ginibre matrix with the R diagonal phases removed.
inline CMat random_unitary(Eigen::Index dim, std::mt19937_64& gen) {
  const CMat g = gaussian(dim, dim, gen);
  Eigen::HouseholderQR<CMat> qr(g);
  CMat q = qr.householderQ();
  const CMat r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index i = 0; i < dim; ++i) {
    const double a = std::abs(r(i, i));
    if (a > 0) q.col(i) *= r(i, i) / a;
  }
  return q;
}

inline qaemix::UnitaryOperator random_encoder(std::size_t dim, std::mt19937_64& gen) {
  return qaemix::UnitaryOperator(from_eigen(random_unitary(static_cast<Eigen::Index>(dim), gen)));
}

inline CMat kron(const CMat& a, const CMat& b) { return Eigen::kroneckerProduct(a, b).eval(); }

/// Partial trace by explicit basis sandwiching: sum_k (I (x) <k|) rho (I (x) |k>).
inline CMat trace_out_b(const CMat& rho, Eigen::Index da, Eigen::Index db) {
  CMat out = CMat::Zero(da, da);
  for (Eigen::Index k = 0; k < db; ++k) {
    CMat ek = CMat::Zero(db, 1);
    ek(k, 0) = 1.0;
    const CMat proj = kron(CMat::Identity(da, da), ek);
    out += proj.adjoint() * rho * proj;
  }
  return out;
}

inline CMat trace_out_a(const CMat& rho, Eigen::Index da, Eigen::Index db) {
  CMat out = CMat::Zero(db, db);
  for (Eigen::Index k = 0; k < da; ++k) {
    CMat ek = CMat::Zero(da, 1);
    ek(k, 0) = 1.0;
    const CMat proj = kron(ek, CMat::Identity(db, db));
    out += proj.adjoint() * rho * proj;
  }
  return out;
}

inline double entropy(const CMat& rho) {
  double s = 0.0;
  for (double l : eigenvalues_vec(rho))
    if (l > 1e-12) s -= l * std::log(l);
  return s;
}

inline CMat sqrt_psd(const CMat& rho) {
  Eigen::SelfAdjointEigenSolver<CMat> solver(rho);
  const Eigen::VectorXd l = solver.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return solver.eigenvectors() * l.asDiagonal() * solver.eigenvectors().adjoint();
}

/// Square root keeping only eigenvalues above the round-off level.
inline CMat sqrt_psd_truncated(const CMat& rho) {
  Eigen::SelfAdjointEigenSolver<CMat> solver(rho);
  const double floor = static_cast<double>(rho.rows()) * 1e-15;
  const Eigen::VectorXd l =
      solver.eigenvalues().unaryExpr([floor](double x) { return x > floor ? std::sqrt(x) : 0.0; });
  return solver.eigenvectors() * l.asDiagonal() * solver.eigenvectors().adjoint();
}

/// [||sqrt(rho) sqrt(sigma)||_1]^2, the nuclear norm taken by SVD.
inline double fidelity_squared(const CMat& rho, const CMat& sigma) {
  const CMat product = sqrt_psd_truncated(rho) * sqrt_psd_truncated(sigma);
  const double root = Eigen::JacobiSVD<CMat>(product).singularValues().sum();
  return root * root;
}

inline double mutual_information(const CMat& rho, Eigen::Index da, Eigen::Index db) {
  return entropy(trace_out_b(rho, da, db)) + entropy(trace_out_a(rho, da, db)) - entropy(rho);
}

/// Sum of the k largest eigenvalues.
inline double top_k_sum(const CMat& rho, std::size_t k) {
  auto l = eigenvalues_vec(rho);
  std::sort(l.rbegin(), l.rend());
  double s = 0.0;
  for (std::size_t i = 0; i < k && i < l.size(); ++i) s += l[i];
  return s;
}

inline CMat pauli(char which) {
  CMat p(2, 2);
  switch (which) {
    case 'x': p << 0, 1, 1, 0; break;
    case 'y': p << 0, Cplx(0, -1), Cplx(0, 1), 0; break;
    case 'z': p << 1, 0, 0, -1; break;
    default: p = CMat::Identity(2, 2);
  }
  return p;
}

/// Product of single-qubit Paulis, `ops[i]` on qubit i (qubit 0 leads).
inline CMat pauli_string(const std::string& ops) {
  CMat out = CMat::Identity(1, 1);
  for (char c : ops) out = kron(out, pauli(c));
  return out;
}

inline std::string site_ops(std::size_t n, std::size_t i, char a, std::size_t j = SIZE_MAX,
                            char b = 'i') {
  std::string s(n, 'i');
  s[i] = a;
  if (j < n) s[j] = b;
  return s;
}

inline CMat ising(std::size_t n) {
  const Eigen::Index d = Eigen::Index{1} << n;
  CMat h = CMat::Zero(d, d);
  for (std::size_t j = 0; j + 1 < n; ++j) h -= pauli_string(site_ops(n, j, 'z', j + 1, 'z'));
  for (std::size_t j = 0; j < n; ++j) h -= pauli_string(site_ops(n, j, 'x'));
  return h;
}

inline CMat heisenberg(std::size_t n) {
  const Eigen::Index d = Eigen::Index{1} << n;
  CMat h = CMat::Zero(d, d);
  for (std::size_t j = 0; j + 1 < n; ++j)
    for (char p : {'x', 'y', 'z'}) h += pauli_string(site_ops(n, j, p, j + 1, p));
  return h;
}

/// Gibbs state via the Pade-based matrix exponential.
inline CMat thermal(std::size_t n, double beta) {
  CMat e = (-beta * ising(n)).exp();
  return e / e.trace().real();
}

inline CMat swap_operator(Eigen::Index d) {
  CMat s = CMat::Zero(d * d, d * d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) s(i * d + j, j * d + i) = 1.0;
  return s;
}

/// Slice product with the Pade exponential; later slices on the left.
inline CMat propagate(std::size_t n, double total_time, std::size_t pieces,
                      const std::vector<double>& amps) {
  const CMat h0 = heisenberg(n);
  const std::vector<CMat> hc = {pauli_string(site_ops(n, 0, 'x')), pauli_string(site_ops(n, 0, 'y')),
                                pauli_string(site_ops(n, 1, 'x')), pauli_string(site_ops(n, 1, 'y'))};
  const double dt = total_time / static_cast<double>(pieces);
  CMat u = CMat::Identity(h0.rows(), h0.cols());
  for (std::size_t k = 0; k < pieces; ++k) {
    CMat h = h0;
    for (std::size_t j = 0; j < hc.size(); ++j) h += amps[k * hc.size() + j] * hc[j];
    const CMat step = (Cplx(0, -dt) * h).exp();
    u = step * u;
  }
  return u;
}

/// Spearman correlation with average ranks for ties.
inline double spearman(const std::vector<double>& x, const std::vector<double>& y) {
  auto ranks = [](const std::vector<double>& v) {
    std::vector<std::size_t> idx(v.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](auto a, auto b) { return v[a] < v[b]; });
    std::vector<double> r(v.size());
    for (std::size_t i = 0; i < idx.size();) {
      std::size_t j = i;
      while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
      const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
      for (std::size_t k = i; k <= j; ++k) r[idx[k]] = avg;
      i = j + 1;
    }
    return r;
  };
  const auto rx = ranks(x), ry = ranks(y);
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += rx[i] / n;
    my += ry[i] / n;
  }
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  if (sxx == 0 || syy == 0) return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

}  // namespace oracle
