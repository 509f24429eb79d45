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

#include "qaemix/qae.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>
#include <stdexcept>

namespace qaemix {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require_pr(double p_r) {
  if (!(p_r >= 0.0 && p_r <= 1.0)) {
    throw std::invalid_argument("p_r must lie in [0, 1], got " + std::to_string(p_r));
  }
}

void require_dim(std::size_t actual, std::size_t expected, const char* what) {
  if (actual != expected) {
    throw DimensionError(std::string(what) + ": dimension " + std::to_string(actual) +
                         ", expected " + std::to_string(expected));
  }
}

std::size_t dim_of_qubits(std::size_t n) { return std::size_t{1} << n; }

}  // namespace

QaeProblem::QaeProblem(std::size_t n_a_, std::size_t n_b_, DensityMatrix rho0_, double w_)
    : n_a(n_a_), n_b(n_b_), rho0(std::move(rho0_)), w(w_) {
  if (n_a == 0 || n_b == 0) throw std::invalid_argument("QaeProblem: n_a and n_b must be >= 1");
  require_dim(rho0.dim(), dim(), "QaeProblem");
  if (!(w >= 0.0 && w <= 1.0)) throw std::invalid_argument("QaeProblem: w must lie in [0, 1]");
}

EncodedSplit encode_split(const QaeProblem& problem, const UnitaryOperator& u_e) {
  require_dim(u_e.dim(), problem.dim(), "encode_split");
  auto encoded = DensityMatrix::assume_valid(conjugate(u_e.matrix(), problem.rho0.matrix()));
  auto trash = reduce(encoded, problem.dim_a(), problem.dim_b(), Keep::A);
  auto latent = reduce(encoded, problem.dim_a(), problem.dim_b(), Keep::B);
  return {std::move(encoded), std::move(trash), std::move(latent)};
}

double j_pure(const DensityMatrix& trash, FidelityConvention convention) {
  // Against a pure state the squared fidelity is the <0|rho|0> entry.
  const double overlap = std::clamp(trash(0, 0).real(), 0.0, 1.0);
  return convention == FidelityConvention::Squared ? overlap : std::sqrt(overlap);
}

double j_qmi(const DensityMatrix& encoded, std::size_t n_a, std::size_t n_b) {
  return -quantum_mutual_information(encoded, dim_of_qubits(n_a), dim_of_qubits(n_b));
}

CostTerms cost_terms(const QaeProblem& problem, const UnitaryOperator& u_e,
                     FidelityConvention convention) {
  const auto split = encode_split(problem, u_e);
  const double jp = j_pure(split.trash, convention);
  const double jq = j_qmi(split.encoded, problem.n_a, problem.n_b);
  return {jp, jq, problem.w * jp + (1.0 - problem.w) * jq};
}

double phi(const QaeProblem& problem, const UnitaryOperator& u_e, FidelityConvention convention) {
  return cost_terms(problem, u_e, convention).phi;
}

double qae_pure_bound(const DensityMatrix& rho0, std::size_t n_b) {
  const std::size_t keep = dim_of_qubits(n_b);
  if (keep > rho0.dim()) throw DimensionError("qae_pure_bound: latent space larger than state");
  const auto values = hermitian_eigendecompose(rho0.matrix()).values;  // ascending
  double sum = 0.0;
  for (std::size_t i = 0; i < keep; ++i) sum += values[values.size() - 1 - i];
  return std::clamp(sum, 0.0, 1.0);
}

std::vector<double> default_pr_candidates() {
  std::vector<double> c;
  for (int i = 0; i <= 10; ++i) c.push_back(i / 10.0);
  return c;
}

std::string describe(const ReferenceStrategy& strategy) {
  return std::visit(
      overloaded{
          [](const TrashClone&) { return std::string("trash"); },
          [](const PureZero&) { return std::string("pure"); },
          [](const MixBlend& m) {
            return std::visit(overloaded{
                                  [](const FixedPr& f) {
                                    std::ostringstream os;
                                    os << "mix:" << f.p_r;
                                    return os.str();
                                  },
                                  [](const GridPr&) { return std::string("mix:grid"); },
                                  [](const BoundPr&) { return std::string("mix:bound"); },
                                  [](const GuessPr&) { return std::string("mix:guess"); },
                              },
                              m.source);
          },
      },
      strategy);
}

DensityMatrix mix_reference(std::size_t n_a, double p_r) {
  require_pr(p_r);
  const std::size_t d = dim_of_qubits(n_a);
  ComplexMatrix m(d, d);
  for (std::size_t i = 0; i < d; ++i) m(i, i) = (1.0 - p_r) / static_cast<double>(d);
  m(0, 0) += p_r;
  return DensityMatrix::assume_valid(std::move(m));
}

Reference build_reference(const ReferenceStrategy& strategy, const ReferenceContext& context) {
  return std::visit(
      overloaded{
          [&](const TrashClone&) -> Reference {
            if (context.trash == nullptr) {
              throw std::invalid_argument("build_reference: trash-clone needs the trash state");
            }
            return {*context.trash, std::nullopt};
          },
          [&](const PureZero&) -> Reference {
            return {basis_zero(dim_of_qubits(context.n_a)), std::nullopt};
          },
          [&](const MixBlend& mix) -> Reference {
            const double p_r = std::visit(
                overloaded{
                    [](const FixedPr& f) { return f.p_r; },
                    [](const GridPr&) -> double {
                      throw std::invalid_argument(
                          "build_reference: grid p_r needs the encoder; use grid_search_pr");
                    },
                    [&](const BoundPr&) {
                      if (context.rho0 == nullptr) {
                        throw std::invalid_argument("build_reference: bound p_r needs rho0");
                      }
                      const double b = qae_pure_bound(*context.rho0, context.n_b);
                      return b * b;
                    },
                    [&](const GuessPr&) {
                      if (!context.current_j_pure) {
                        throw std::invalid_argument("build_reference: guess p_r needs J_pure");
                      }
                      const double jp = std::clamp(*context.current_j_pure, 0.0, 1.0);
                      return jp * jp;
                    },
                },
                mix.source);
            return {mix_reference(context.n_a, p_r), p_r};
          },
      },
      strategy);
}

DensityMatrix decode(const UnitaryOperator& u_e, const DensityMatrix& latent,
                     const DensityMatrix& reference) {
  require_dim(reference.dim() * latent.dim(), u_e.dim(), "decode");
  const ComplexMatrix combined = tensor_product(reference.matrix(), latent.matrix());
  const ComplexMatrix& u = u_e.matrix();
  return DensityMatrix::assume_valid(u.adjoint() * combined * u);
}

double decoding_fidelity(const DensityMatrix& rho0, const DensityMatrix& rho_f,
                         FidelityConvention convention) {
  return fidelity(rho0, rho_f, convention);
}

GridSearchResult grid_search_pr(const QaeProblem& problem, const UnitaryOperator& u_e,
                                const std::vector<double>& candidates,
                                FidelityConvention convention) {
  if (candidates.empty()) throw std::invalid_argument("grid_search_pr: empty candidate list");
  const auto split = encode_split(problem, u_e);
  GridSearchResult result{0.0, -1.0, {}};
  result.table.reserve(candidates.size());
  for (double p_r : candidates) {
    const auto rho_f = decode(u_e, split.latent, mix_reference(problem.n_a, p_r));
    const double jd = decoding_fidelity(problem.rho0, rho_f, convention);
    result.table.emplace_back(p_r, jd);
    const bool better = jd > result.best_j_d + 1e-12;
    const bool tie_larger = std::abs(jd - result.best_j_d) <= 1e-12 && p_r > result.best_p_r;
    if (better || tie_larger) {
      result.best_j_d = jd;
      result.best_p_r = p_r;
    }
  }
  return result;
}

EnsembleResult evaluate_ensemble(const std::vector<EnsembleMember>& members,
                                 const UnitaryOperator& u_e, const DensityMatrix& reference,
                                 std::size_t n_a, std::size_t n_b,
                                 FidelityConvention convention) {
  if (members.empty()) throw std::invalid_argument("evaluate_ensemble: no members");
  double total = 0.0;
  for (const auto& m : members) {
    if (!(m.weight >= 0.0)) throw std::invalid_argument("evaluate_ensemble: negative weight");
    total += m.weight;
  }
  if (std::abs(total - 1.0) > 1e-9) {
    throw std::invalid_argument("evaluate_ensemble: weights sum to " + std::to_string(total));
  }
  require_dim(reference.dim(), dim_of_qubits(n_a), "evaluate_ensemble reference");
  EnsembleResult out{{}, 0.0};
  for (const auto& m : members) {
    QaeProblem member(n_a, n_b, m.state, 0.0);
    const auto split = encode_split(member, u_e);
    const double jd =
        decoding_fidelity(m.state, decode(u_e, split.latent, reference), convention);
    out.per_member_j_d.push_back(jd);
    out.weighted_mean_j_d += m.weight * jd;
  }
  return out;
}

CompressionResult compress(const QaeProblem& problem, const UnitaryOperator& u_e,
                           const ReferenceStrategy& strategy, FidelityConvention convention,
                           std::optional<double> guess_j_pure) {
  auto split = encode_split(problem, u_e);
  const double jp = j_pure(split.trash, convention);
  const double jq = j_qmi(split.encoded, problem.n_a, problem.n_b);
  const double bound = qae_pure_bound(problem.rho0, problem.n_b);

  Reference reference = [&]() -> Reference {
    if (const auto* mix = std::get_if<MixBlend>(&strategy)) {
      if (const auto* grid = std::get_if<GridPr>(&mix->source)) {
        const auto& candidates = grid->candidates.empty() ? default_pr_candidates() : grid->candidates;
        const auto best = grid_search_pr(problem, u_e, candidates, convention);
        return {mix_reference(problem.n_a, best.best_p_r), best.best_p_r};
      }
    }
    ReferenceContext ctx{problem.n_a, problem.n_b, &split.trash, &problem.rho0,
                         guess_j_pure ? guess_j_pure : std::optional<double>(jp)};
    return build_reference(strategy, ctx);
  }();

  auto rho_f = decode(u_e, split.latent, reference.state);
  const double jd = decoding_fidelity(problem.rho0, rho_f, convention);
  const double je = fidelity(split.trash, reference.state, convention);
  return {jp,
          jq,
          je,
          jd,
          problem.w * jp + (1.0 - problem.w) * jq,
          bound,
          reference.p_r,
          std::move(split.latent),
          std::move(split.trash),
          std::move(rho_f)};
}

}  // namespace qaemix
