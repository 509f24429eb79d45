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
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "qaemix/control.hpp"
#include "qaemix/quantum_info.hpp"

namespace qaemix {

/// Compression of an (n_a + n_b)-qubit state. The n_a trash qubits are the
/// leading tensor factor; the n_b latent qubits trail.
struct QaeProblem {
  QaeProblem(std::size_t n_a, std::size_t n_b, DensityMatrix rho0, double w);

  std::size_t n_a;
  std::size_t n_b;
  DensityMatrix rho0;
  double w;

  std::size_t dim_a() const noexcept { return std::size_t{1} << n_a; }
  std::size_t dim_b() const noexcept { return std::size_t{1} << n_b; }
  std::size_t dim() const noexcept { return dim_a() * dim_b(); }
};

struct EncodedSplit {
  DensityMatrix encoded;  // U rho0 U^dagger
  DensityMatrix trash;    // Tr_B
  DensityMatrix latent;   // Tr_A
};

EncodedSplit encode_split(const QaeProblem& problem, const UnitaryOperator& u_e);

/// F(trash, |0..0><0..0|).
double j_pure(const DensityMatrix& trash, FidelityConvention convention = FidelityConvention::Squared);
/// -I(encoded) across the trash/latent cut.
double j_qmi(const DensityMatrix& encoded, std::size_t n_a, std::size_t n_b);

struct CostTerms {
  double j_pure;
  double j_qmi;
  double phi;  // w * j_pure + (1 - w) * j_qmi
};

CostTerms cost_terms(const QaeProblem& problem, const UnitaryOperator& u_e,
                     FidelityConvention convention = FidelityConvention::Squared);
double phi(const QaeProblem& problem, const UnitaryOperator& u_e,
           FidelityConvention convention = FidelityConvention::Squared);

/// Sum of the 2^n_b largest eigenvalues of rho0.
double qae_pure_bound(const DensityMatrix& rho0, std::size_t n_b);

// ---------------------------------------------------------------------------
// Reference states.

struct TrashClone {};
struct PureZero {};
struct FixedPr {
  double p_r;
};
struct GridPr {
  std::vector<double> candidates;
};
struct BoundPr {};
struct GuessPr {};
using PrSource = std::variant<FixedPr, GridPr, BoundPr, GuessPr>;
struct MixBlend {
  PrSource source;
};
using ReferenceStrategy = std::variant<TrashClone, PureZero, MixBlend>;

/// {0, 0.1, ..., 1.0}
std::vector<double> default_pr_candidates();

/// "trash", "pure", "mix:grid", "mix:bound", "mix:guess", "mix:0.3".
std::string describe(const ReferenceStrategy& strategy);

/// p_r |0><0| + (1 - p_r) I/d_A on n_a qubits.
DensityMatrix mix_reference(std::size_t n_a, double p_r);

struct ReferenceContext {
  std::size_t n_a = 1;
  std::size_t n_b = 1;
  const DensityMatrix* trash = nullptr;
  const DensityMatrix* rho0 = nullptr;
  std::optional<double> current_j_pure;
};

struct Reference {
  DensityMatrix state;
  std::optional<double> p_r;
};

/// Resolves everything except grid search, which needs the encoder; use
/// grid_search_pr for MixBlend{GridPr}.
Reference build_reference(const ReferenceStrategy& strategy, const ReferenceContext& context);

/// U^dagger (reference (x) latent) U; the reference replaces the trash slot.
DensityMatrix decode(const UnitaryOperator& u_e, const DensityMatrix& latent,
                     const DensityMatrix& reference);

double decoding_fidelity(const DensityMatrix& rho0, const DensityMatrix& rho_f,
                         FidelityConvention convention = FidelityConvention::Squared);

struct GridSearchResult {
  double best_p_r;
  double best_j_d;
  std::vector<std::pair<double, double>> table;  // (p_r, J_d) in candidate order
};

/// Ties within 1e-12 go to the larger p_r.
GridSearchResult grid_search_pr(const QaeProblem& problem, const UnitaryOperator& u_e,
                                const std::vector<double>& candidates,
                                FidelityConvention convention = FidelityConvention::Squared);

struct EnsembleMember {
  double weight;
  DensityMatrix state;
};

struct EnsembleResult {
  std::vector<double> per_member_j_d;
  double weighted_mean_j_d;
};

/// Shared encoder and shared reference applied to each member.
EnsembleResult evaluate_ensemble(const std::vector<EnsembleMember>& members,
                                 const UnitaryOperator& u_e, const DensityMatrix& reference,
                                 std::size_t n_a, std::size_t n_b,
                                 FidelityConvention convention = FidelityConvention::Squared);

struct CompressionResult {
  double j_pure;
  double j_qmi;
  double j_e;
  double j_d;
  double phi;
  double bound;
  std::optional<double> p_r_used;
  DensityMatrix latent;
  DensityMatrix trash;
  DensityMatrix reconstructed;
};

/// Full encode / reference / decode pass. `guess_j_pure` supplies the J_pure
/// used by the Guess source; when absent the encoder's own J_pure is used.
CompressionResult compress(const QaeProblem& problem, const UnitaryOperator& u_e,
                           const ReferenceStrategy& strategy,
                           FidelityConvention convention = FidelityConvention::Squared,
                           std::optional<double> guess_j_pure = std::nullopt);

}  // namespace qaemix
