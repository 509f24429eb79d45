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

// qaemix command-line driver.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "qaemix/chart.hpp"
#include "qaemix/experiment.hpp"

namespace ex = qaemix::experiment;
using nlohmann::json;

namespace {

struct RunFlags {
  std::string config_path;
  std::optional<std::string> family;
  std::optional<std::string> beta, alpha, p0;
  std::optional<std::size_t> n_a, n_b;
  std::optional<double> w;
  std::optional<std::string> ref, pr;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> replicates;
  std::optional<std::string> out;
  std::optional<std::size_t> workers;
  std::optional<std::string> fidelity;
  std::optional<std::string> es_baseline;
  std::optional<std::size_t> max_iterations;
  std::optional<std::size_t> probe_every;
};

void add_run_flags(CLI::App* app, RunFlags& f) {
  app->add_option("--config", f.config_path, "JSON experiment config; flags override it")
      ->check(CLI::ExistingFile);
  app->add_option("--family", f.family,
                  "thermal | werner | blended | haar_pure | maximally_mixed | basis_zero");
  app->add_option("--beta", f.beta, "thermal beta: value, list a,b,c or start:stop:step");
  app->add_option("--alpha", f.alpha, "werner alpha: value, list or start:stop:step");
  app->add_option("--p0", f.p0, "blended p0: value, list or start:stop:step");
  app->add_option("--na", f.n_a, "trash qubits");
  app->add_option("--nb", f.n_b, "latent qubits");
  app->add_option("--w", f.w, "weight of J_pure in the cost");
  app->add_option("--ref", f.ref, "trash | pure | mix");
  app->add_option("--pr", f.pr, "grid | bound | guess | number in [0,1] (with --ref mix)");
  app->add_option("--seed", f.seed, "master seed");
  app->add_option("--replicates", f.replicates, "runs per grid point");
  app->add_option("--out", f.out, "output directory");
  app->add_option("--workers", f.workers, "grid points run concurrently");
  app->add_option("--fidelity", f.fidelity, "squared | root");
  app->add_option("--es-baseline", f.es_baseline, "mean | none");
  app->add_option("--max-iter", f.max_iterations, "ES iteration cap");
  app->add_option("--probe-every", f.probe_every, "J_d probe interval in iterations, 0 disables");
}

ex::ExperimentConfig build_config(const RunFlags& f) {
  ex::ExperimentConfig c;
  const bool from_file = !f.config_path.empty();
  if (from_file) c = ex::load_config(f.config_path);

  const std::size_t old_qubits = c.n_qubits();
  if (f.n_a) c.n_a = *f.n_a;
  if (f.n_b) c.n_b = *f.n_b;
  if (!from_file || c.n_qubits() != old_qubits) {
    const auto keep = c.es;
    c.es = ex::es_defaults_for(c.n_qubits());
    if (from_file) c.es.baseline = keep.baseline;
  }

  const std::string kind = f.family.value_or(qaemix::family_name(c.family));
  std::uint64_t family_seed = 1;
  if (const auto* b = std::get_if<qaemix::BlendedFamily>(&c.family)) family_seed = b->psi_seed;
  if (const auto* h = std::get_if<qaemix::HaarPureFamily>(&c.family)) family_seed = h->seed;
  const double current = qaemix::family_parameter(c.family);
  const bool same_kind = kind == qaemix::family_name(c.family);
  c.family = ex::make_family(kind, c.n_qubits(),
                             same_kind && !std::isnan(current) ? std::optional<double>(current)
                                                              : std::nullopt,
                             family_seed);
  if (!same_kind) c.grid.clear();

  const std::string param = qaemix::family_parameter_name(c.family);
  auto take = [&](const std::optional<std::string>& flag, const char* name) {
    if (!flag) return;
    if (param != name) {
      throw std::invalid_argument(std::string("--") + name + " does not apply to family '" +
                                  kind + "'");
    }
    c.grid = ex::parse_grid(*flag);
  };
  take(f.beta, "beta");
  take(f.alpha, "alpha");
  take(f.p0, "p0");

  if (f.w) c.w = *f.w;
  if (f.ref) {
    c.reference = ex::parse_reference(*f.ref, f.pr.value_or("grid"));
  } else if (f.pr) {
    c.reference = ex::parse_reference("mix", *f.pr);
  }
  if (f.seed) c.seed = *f.seed;
  if (f.replicates) c.replicates = *f.replicates;
  if (f.out) c.out = *f.out;
  if (f.workers) c.workers = *f.workers;
  if (f.fidelity) c.fidelity = qaemix::parse_fidelity_convention(*f.fidelity);
  if (f.es_baseline) c.es.baseline = qaemix::es::parse_baseline(*f.es_baseline);
  if (f.max_iterations) c.es.max_iterations = *f.max_iterations;
  if (f.probe_every) c.probe_every = *f.probe_every;
  c.validate();
  return c;
}

json matrix_json(const qaemix::ComplexMatrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back({m(i, j).real(), m(i, j).imag()});
    rows.push_back(row);
  }
  return rows;
}

int cmd_state(const ex::ExperimentConfig& c) {
  json out = json::array();
  for (double v : c.grid_values()) {
    const auto family = qaemix::with_parameter(c.family, v);
    const auto rho = qaemix::make_state(family);
    out.push_back({{"family", qaemix::family_name(family)},
                   {"parameter", qaemix::family_parameter_name(family)},
                   {"value", v},
                   {"dim", rho.dim()},
                   {"matrix", matrix_json(rho.matrix())}});
  }
  std::cout << (out.size() == 1 ? out[0] : out).dump(2) << "\n";
  return 0;
}

int cmd_bound(const ex::ExperimentConfig& c) {
  const std::string param = qaemix::family_parameter_name(c.family);
  for (double v : c.grid_values()) {
    const auto rho = qaemix::make_state(qaemix::with_parameter(c.family, v));
    const double b = qaemix::qae_pure_bound(rho, c.n_b);
    if (param.empty()) {
      std::printf("%.12g\n", b);
    } else {
      std::printf("%s=%.12g bound=%.12g\n", param.c_str(), v, b);
    }
  }
  return 0;
}

int cmd_train(const ex::ExperimentConfig& c) {
  const auto run = ex::run_single(c);
  std::cout << ex::to_json(run.record).dump(2) << "\n";
  return 0;
}

ex::ExperimentConfig with_default_grid(ex::ExperimentConfig c, bool grid_flag_given) {
  if (c.grid.empty() && !grid_flag_given) c.grid = ex::default_grid(c.family);
  if (qaemix::family_parameter_name(c.family).empty()) c.grid.clear();
  return c;
}

int cmd_sweep(const ex::ExperimentConfig& c) {
  const auto result = ex::run_sweep(c);
  std::vector<ex::ResultRecord> records;
  bool any_failed = false;
  for (const auto& r : result.runs) {
    records.push_back(r.record);
    any_failed |= r.record.failed;
  }
  if (c.out.empty()) {
    std::cout << ex::results_csv(records, result.aggregates);
  } else {
    std::cerr << "wrote " << (c.out / "sweep.csv").string() << " and "
              << (c.out / "manifest.json").string() << "\n";
  }
  if (any_failed) std::cerr << "warning: some sweep points failed; see the status column\n";
  return 0;
}

int cmd_compare(const ex::ExperimentConfig& c) {
  const auto result = ex::compare_strategies(c);
  if (c.out.empty()) {
    std::cout << ex::comparison_csv(result.rows);
  } else {
    std::cerr << "wrote " << (c.out / "compare.csv").string() << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qaemix: quantum autoencoders with mixed reference states"};
  app.set_version_flag("--version", std::string(ex::kVersion));
  app.require_subcommand(1);

  RunFlags flags;
  auto* state = app.add_subcommand("state", "dump a family member's density matrix as JSON");
  auto* bound = app.add_subcommand("bound", "print the pure-reference compression bound");
  auto* train = app.add_subcommand("train", "train one encoder and decode");
  auto* sweep = app.add_subcommand("sweep", "grid x replicate sweep to CSV");
  auto* compare = app.add_subcommand("compare-pr", "grid, bound and guess p_r on shared encoders");
  for (auto* sub : {state, bound, train, sweep, compare}) add_run_flags(sub, flags);

  std::string csv_path, x_column, chart_out, where, title;
  std::vector<std::string> y_columns;
  auto* chart = app.add_subcommand("chart", "render CSV columns as an SVG line chart");
  chart->add_option("--csv", csv_path, "input CSV")->required()->check(CLI::ExistingFile);
  chart->add_option("--x", x_column, "x column")->required();
  chart->add_option("--y", y_columns, "y columns")->required()->delimiter(',');
  chart->add_option("--where", where, "column=value row filter (default row_kind=mean if present)");
  chart->add_option("--title", title, "chart title");
  chart->add_option("--out", chart_out, "output SVG")->required();

  std::string manifest_path;
  double replay_tolerance = 1e-9;
  auto* replay = app.add_subcommand("replay", "recompute J_d from a manifest");
  replay->add_option("--manifest", manifest_path, "manifest JSON")->required()->check(CLI::ExistingFile);
  replay->add_option("--tolerance", replay_tolerance, "allowed |J_d difference|");

  CLI11_PARSE(app, argc, argv);

  try {
    if (chart->parsed()) {
      qaemix::chart::ChartSpec spec{x_column, y_columns, std::nullopt, title};
      if (!where.empty()) {
        const auto eq = where.find('=');
        if (eq == std::string::npos) throw std::invalid_argument("--where expects column=value");
        spec.where = std::make_pair(where.substr(0, eq), where.substr(eq + 1));
      } else {
        const auto table = qaemix::chart::read_csv(csv_path);
        if (table.has_column("row_kind")) spec.where = std::make_pair("row_kind", "mean");
      }
      qaemix::chart::emit_chart(csv_path, spec, chart_out);
      return 0;
    }
    if (replay->parsed()) {
      std::ifstream in(manifest_path);
      const auto checks = ex::replay(json::parse(in));
      int bad = 0;
      for (const auto& c : checks) {
        const double diff = std::abs(c.replayed_j_d - c.recorded_j_d);
        std::printf("value=%.12g replicate=%zu recorded=%.15f replayed=%.15f diff=%.3e %s\n",
                    c.value, c.replicate, c.recorded_j_d, c.replayed_j_d, diff,
                    diff <= replay_tolerance ? "ok" : "MISMATCH");
        bad += diff > replay_tolerance;
      }
      return bad == 0 ? 0 : 2;
    }
    const auto config = build_config(flags);
    if (state->parsed()) return cmd_state(config);
    if (bound->parsed()) return cmd_bound(config);
    if (train->parsed()) return cmd_train(config);
    const bool grid_flag = flags.beta || flags.alpha || flags.p0;
    if (sweep->parsed()) return cmd_sweep(with_default_grid(config, grid_flag));
    if (compare->parsed()) {
      auto c = with_default_grid(config, grid_flag);
      if (!flags.ref && !std::holds_alternative<qaemix::MixBlend>(c.reference)) {
        c.reference = qaemix::MixBlend{qaemix::GridPr{}};
      }
      return cmd_compare(c);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
