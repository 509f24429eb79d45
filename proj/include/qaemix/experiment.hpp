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
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "qaemix/control.hpp"
#include "qaemix/es.hpp"
#include "qaemix/qae.hpp"
#include "qaemix/states.hpp"

namespace qaemix::experiment {

inline constexpr std::string_view kVersion = "0.1.0";
inline constexpr int kConfigSchemaVersion = 1;
inline constexpr int kManifestSchemaVersion = 1;
inline constexpr int kCsvSchemaVersion = 1;

struct ControlShape {
  double total_time = 20.0;
  std::size_t pieces = 100;
  double u_min = -10.0;
  double u_max = 10.0;
};

struct ExperimentConfig {
  StateFamilySpec family = ThermalFamily{};
  std::vector<double> grid;  // family parameter values; empty means the family's own value
  std::size_t n_a = 1;
  std::size_t n_b = 1;
  double w = 0.5;
  ReferenceStrategy reference = TrashClone{};
  es::EsConfig es;  // es.seed is ignored, each run derives its own
  ControlShape control;
  FidelityConvention fidelity = FidelityConvention::Squared;
  std::size_t replicates = 3;
  std::uint64_t seed = 0;
  std::size_t workers = 1;
  std::filesystem::path out;  // empty: nothing is written
  std::size_t probe_every = 25;

  std::size_t n_qubits() const noexcept { return n_a + n_b; }
  /// Grid values, or the single value carried by the family.
  std::vector<double> grid_values() const;
  /// Throws std::invalid_argument naming the offending field.
  void validate() const;
};

/// ES defaults by register size: NP 40 and 1500 iterations up to 2 qubits,
/// NP 50 and 3000 iterations above.
es::EsConfig es_defaults_for(std::size_t n_qubits);

/// Family of the given kind sized to n_qubits; `value` sets its parameter if
/// it has one. Kinds: thermal, werner, blended, haar_pure, maximally_mixed,
/// basis_zero.
StateFamilySpec make_family(std::string_view kind, std::size_t n_qubits,
                            std::optional<double> value = std::nullopt,
                            std::uint64_t family_seed = 1);

/// "trash" | "pure" | "mix"; for mix, pr is "grid" | "bound" | "guess" | a number.
ReferenceStrategy parse_reference(std::string_view ref, std::string_view pr = "grid");
/// Inverse of describe(); grid candidates come from `grid_candidates`.
ReferenceStrategy reference_from_description(std::string_view text,
                                             const std::vector<double>& grid_candidates = {});

/// Sweep axis used when a sweep names no grid: beta 0.2:2.0:0.2,
/// alpha -1:1:0.2, p0 0:1:0.1; families without a parameter get {0}.
std::vector<double> default_grid(const StateFamilySpec& family);

/// "a:b:step" expands inclusively; a bare number is a one-point grid.
std::vector<double> parse_grid(std::string_view text);

nlohmann::json to_json(const ExperimentConfig& config);
ExperimentConfig config_from_json(const nlohmann::json& j);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Hash of (master, family, grid value, replicate). Independent of the grid
/// so that extending a sweep leaves existing points untouched.
std::uint64_t derive_seed(std::uint64_t master, std::string_view family, double value,
                          std::size_t replicate);

struct ResultRecord {
  std::string row_kind = "run";  // run | mean | min | max
  std::string family;
  std::string parameter;  // "beta", "alpha", "p0" or ""
  double value = 0.0;
  std::size_t n_qubits = 0;
  double w = 0.0;
  std::string strategy;
  std::optional<double> p_r_used;
  double j_pure = 0.0;
  double j_qmi = 0.0;
  double j_e = 0.0;
  double j_d = 0.0;
  double bound = 0.0;
  std::uint64_t seed = 0;
  std::size_t replicate = 0;
  std::size_t iterations = 0;
  double wall_seconds = 0.0;
  bool failed = false;
  std::string error;
};

nlohmann::json to_json(const ResultRecord& record);
ResultRecord record_from_json(const nlohmann::json& j);

struct RunOutcome {
  ResultRecord record;
  es::TrainingTrace trace;
  std::vector<double> theta;  // trained schedule, slice-major
};

/// Build rho0, train U_e on Phi(w), resolve the reference, decode, score.
/// Performs no I/O.
RunOutcome execute_run(const ExperimentConfig& config, double value, std::size_t replicate);

/// execute_run for the first grid value and replicate 0. With config.out set
/// writes run.manifest.json and run.trace.jsonl there; on failure the
/// partial trace is written before the exception propagates.
RunOutcome run_single(const ExperimentConfig& config);

struct SweepResult {
  std::vector<RunOutcome> runs;  // grid-major, replicate-minor
  std::vector<ResultRecord> aggregates;
  nlohmann::json manifest;
};

/// Every grid value x replicate, up to config.workers concurrently. Failed
/// points are kept as flagged rows. With config.out set writes sweep.csv,
/// manifest.json and traces/.
SweepResult run_sweep(const ExperimentConfig& config);

/// Rows of kind mean, min and max per grid value, over its successful
/// replicates. `replicate` holds the number of runs that contributed.
std::vector<ResultRecord> aggregate(const std::vector<ResultRecord>& runs);

std::string csv_header();
std::string csv_row(const ResultRecord& record);
/// Schema comment, header, run rows, then aggregate rows.
std::string results_csv(const std::vector<ResultRecord>& runs,
                        const std::vector<ResultRecord>& aggregates);

struct StrategyComparison {
  double value = 0.0;
  std::size_t replicate = 0;
  std::uint64_t seed = 0;
  double bound = 0.0;
  double grid_p_r = 0.0;
  double grid_j_d = 0.0;
  double bound_p_r = 0.0;
  double bound_j_d = 0.0;
  double guess_p_r = 0.0;
  double guess_j_d = 0.0;
  std::size_t iterations = 0;
  bool failed = false;
  std::string error;
};

struct ComparisonResult {
  std::vector<StrategyComparison> rows;
  nlohmann::json manifest;
};

/// Trains once per grid value x replicate and resolves the grid, bound and
/// guess p_r on that encoder. With config.out set writes compare.csv and
/// manifest.json.
ComparisonResult compare_strategies(const ExperimentConfig& config);
std::string comparison_csv(const std::vector<StrategyComparison>& rows);

struct ReplayCheck {
  double value = 0.0;
  std::size_t replicate = 0;
  double recorded_j_d = 0.0;
  double replayed_j_d = 0.0;
};

/// Recomputes J_d of every successful run in a manifest from its stored
/// schedule.
std::vector<ReplayCheck> replay(const nlohmann::json& manifest);

/// One JSON object per line.
std::string trace_jsonl(const es::TrainingTrace& trace);

void write_text(const std::filesystem::path& path, std::string_view text);

}  // namespace qaemix::experiment
