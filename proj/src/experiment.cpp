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

#include "qaemix/experiment.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "qaemix/rng.hpp"

namespace qaemix::experiment {

using nlohmann::json;

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

double parse_number(std::string_view text, std::string_view what) {
  double v = 0.0;
  const auto* first = text.data();
  const auto* last = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc{} || ptr != last || !std::isfinite(v)) {
    throw std::invalid_argument(std::string(what) + ": '" + std::string(text) +
                                "' is not a finite number");
  }
  return v;
}

// Grid arithmetic leaves 0.30000000000000004-style residue; snap to 12 places
// so seeds and file names stay stable.
double snap(double v) {
  const double r = std::round(v * 1e12) / 1e12;
  return r == 0.0 ? 0.0 : r;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string value_tag(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

void require_keys(const json& j, std::initializer_list<std::string_view> allowed,
                  std::string_view where) {
  if (!j.is_object()) throw std::invalid_argument(std::string(where) + " must be an object");
  for (const auto& [key, _] : j.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw std::invalid_argument(std::string(where) + ": unknown key '" + key + "'");
    }
  }
}

json family_to_json(const StateFamilySpec& family) {
  json j{{"name", family_name(family)}};
  std::visit(overloaded{
                 [&](const ThermalFamily& f) { j["beta"] = f.beta; },
                 [&](const WernerFamily& f) { j["alpha"] = f.alpha; },
                 [&](const BlendedFamily& f) {
                   j["p0"] = f.p0;
                   j["psi_seed"] = f.psi_seed;
                 },
                 [&](const HaarPureFamily& f) { j["seed"] = f.seed; },
                 [](const auto&) {},
             },
             family);
  return j;
}

StateFamilySpec family_from_json(const json& j, std::size_t n_qubits) {
  require_keys(j, {"name", "beta", "alpha", "p0", "psi_seed", "seed"}, "family");
  const std::string name = j.at("name").get<std::string>();
  std::optional<double> value;
  for (const char* key : {"beta", "alpha", "p0"}) {
    if (j.contains(key)) value = j.at(key).get<double>();
  }
  std::uint64_t seed = 1;
  if (j.contains("psi_seed")) seed = j.at("psi_seed").get<std::uint64_t>();
  if (j.contains("seed")) seed = j.at("seed").get<std::uint64_t>();
  auto family = make_family(name, n_qubits, value, seed);
  const std::string expected = family_parameter_name(family);
  for (const char* key : {"beta", "alpha", "p0"}) {
    if (j.contains(key) && expected != key) {
      throw std::invalid_argument("family '" + name + "' has no parameter '" + key + "'");
    }
  }
  return family;
}

json reference_to_json(const ReferenceStrategy& reference) {
  return std::visit(
      overloaded{
          [](const TrashClone&) { return json{{"kind", "trash"}}; },
          [](const PureZero&) { return json{{"kind", "pure"}}; },
          [](const MixBlend& m) {
            json j{{"kind", "mix"}};
            std::visit(overloaded{
                           [&](const FixedPr& f) { j["p_r"] = f.p_r; },
                           [&](const GridPr& g) {
                             j["p_r"] = "grid";
                             if (!g.candidates.empty()) j["candidates"] = g.candidates;
                           },
                           [&](const BoundPr&) { j["p_r"] = "bound"; },
                           [&](const GuessPr&) { j["p_r"] = "guess"; },
                       },
                       m.source);
            return j;
          },
      },
      reference);
}

ReferenceStrategy reference_from_json(const json& j) {
  require_keys(j, {"kind", "p_r", "candidates"}, "reference");
  const std::string kind = j.at("kind").get<std::string>();
  if (kind != "mix") {
    if (j.contains("p_r") || j.contains("candidates")) {
      throw std::invalid_argument("reference: p_r only applies to kind 'mix'");
    }
    return parse_reference(kind);
  }
  if (!j.contains("p_r")) return MixBlend{GridPr{}};
  const auto& pr = j.at("p_r");
  if (pr.is_number()) return MixBlend{FixedPr{pr.get<double>()}};
  auto strategy = parse_reference("mix", pr.get<std::string>());
  if (j.contains("candidates")) {
    auto& mix = std::get<MixBlend>(strategy);
    auto* grid = std::get_if<GridPr>(&mix.source);
    if (grid == nullptr) throw std::invalid_argument("reference: candidates need p_r = grid");
    grid->candidates = j.at("candidates").get<std::vector<double>>();
  }
  return strategy;
}

json es_to_json(const es::EsConfig& c) {
  return {{"population", c.population},
          {"delta", c.delta},
          {"learning_rate", c.learning_rate},
          {"momentum", c.momentum},
          {"decay_factor", c.decay_factor},
          {"decay_period", c.decay_period},
          {"max_iterations", c.max_iterations},
          {"convergence_window", c.convergence_window},
          {"convergence_tolerance", c.convergence_tolerance},
          {"baseline", std::string(es::to_string(c.baseline))}};
}

void es_from_json(const json& j, es::EsConfig& c) {
  require_keys(j,
               {"population", "delta", "learning_rate", "momentum", "decay_factor",
                "decay_period", "max_iterations", "convergence_window", "convergence_tolerance",
                "baseline"},
               "es");
  auto read = [&](const char* key, auto& field) {
    if (j.contains(key)) j.at(key).get_to(field);
  };
  read("population", c.population);
  read("delta", c.delta);
  read("learning_rate", c.learning_rate);
  read("momentum", c.momentum);
  read("decay_factor", c.decay_factor);
  read("decay_period", c.decay_period);
  read("max_iterations", c.max_iterations);
  read("convergence_window", c.convergence_window);
  read("convergence_tolerance", c.convergence_tolerance);
  if (j.contains("baseline")) c.baseline = es::parse_baseline(j.at("baseline").get<std::string>());
}

json schedule_to_json(const ControlShape& shape, const std::vector<double>& theta) {
  return {{"total_time", shape.total_time},
          {"pieces", shape.pieces},
          {"channels", kControlChannels},
          {"u_min", shape.u_min},
          {"u_max", shape.u_max},
          {"amplitudes", theta}};
}

ControlSchedule schedule_from_json(const json& j) {
  return ControlSchedule(j.at("total_time").get<double>(), j.at("pieces").get<std::size_t>(),
                         j.at("channels").get<std::size_t>(),
                         j.at("amplitudes").get<std::vector<double>>(),
                         j.at("u_min").get<double>(), j.at("u_max").get<double>());
}

std::vector<double> grid_candidates_of(const ReferenceStrategy& reference) {
  if (const auto* mix = std::get_if<MixBlend>(&reference)) {
    if (const auto* grid = std::get_if<GridPr>(&mix->source)) return grid->candidates;
  }
  return {};
}

// Everything a run needs before the reference is resolved.
struct Trained {
  QaeProblem problem;
  UnitaryOperator encoder;
  es::TrainResult training;
  std::uint64_t seed;
};

ResultRecord blank_record(const ExperimentConfig& config, double value, std::size_t replicate,
                          std::uint64_t seed) {
  ResultRecord r;
  r.family = family_name(config.family);
  r.parameter = family_parameter_name(config.family);
  r.value = value;
  r.n_qubits = config.n_qubits();
  r.w = config.w;
  r.strategy = describe(config.reference);
  r.seed = seed;
  r.replicate = replicate;
  return r;
}

Trained train_encoder(const ExperimentConfig& config, double value, std::size_t replicate,
                      const ReferenceStrategy& probe_reference) {
  const std::uint64_t seed = derive_seed(config.seed, family_name(config.family), value, replicate);
  const auto family = with_parameter(config.family, value);
  QaeProblem problem(config.n_a, config.n_b, make_state(family), config.w);
  const auto system = SpinChainSystem::heisenberg(config.n_qubits());
  const ControlShape shape = config.control;

  es::EsConfig es_config = config.es;
  es_config.seed = seed;
  es_config.lower = shape.u_min;
  es_config.upper = shape.u_max;

  auto encoder_of = [&](std::span<const double> theta) {
    ControlSchedule schedule(shape.total_time, shape.pieces, kControlChannels,
                             std::vector<double>(theta.begin(), theta.end()), shape.u_min,
                             shape.u_max);
    return propagate(system, schedule);
  };
  const auto conv = config.fidelity;
  es::Objective objective = [&](std::span<const double> theta) {
    return phi(problem, encoder_of(theta), conv);
  };
  es::IterationObserver observer;
  if (config.probe_every > 0) {
    observer = [&](es::TraceRecord& record, std::span<const double> theta) {
      if (record.iteration % config.probe_every != 0) return;
      const auto probe = compress(problem, encoder_of(theta), probe_reference, conv);
      record.j_pure = probe.j_pure;
      record.j_qmi = probe.j_qmi;
      record.j_d = probe.j_d;
    };
  }

  auto training = es::train(objective, shape.pieces * kControlChannels, es_config, observer);
  auto encoder = encoder_of(training.theta_star);
  return {std::move(problem), std::move(encoder), std::move(training), seed};
}

json run_entry(const ExperimentConfig& config, const RunOutcome& run) {
  json entry{{"value", run.record.value},
             {"replicate", run.record.replicate},
             {"seed", run.record.seed},
             {"status", run.record.failed ? "failed" : "ok"},
             {"reference", run.record.strategy},
             {"record", to_json(run.record)}};
  if (!run.record.failed) entry["schedule"] = schedule_to_json(config.control, run.theta);
  return entry;
}

json manifest_header(const ExperimentConfig& config, std::string_view command,
                     double wall_seconds) {
  return {{"schema_version", kManifestSchemaVersion},
          {"versions",
           {{"qaemix", std::string(kVersion)},
            {"config_schema", kConfigSchemaVersion},
            {"csv_schema", kCsvSchemaVersion}}},
          {"command", std::string(command)},
          {"wall_seconds", wall_seconds},
          {"config", to_json(config)},
          {"runs", json::array()}};
}

std::string run_stem(const ExperimentConfig& config, double value, std::size_t replicate) {
  std::string stem = family_name(config.family);
  const std::string param = family_parameter_name(config.family);
  if (!param.empty()) stem += "_" + param + "=" + value_tag(value);
  return stem + "_r" + std::to_string(replicate);
}

std::string csv_field(std::string_view text) {
  if (text.find_first_of(",\"\n") == std::string_view::npos) return std::string(text);
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') out += '"';
    out += c == '\n' ? ' ' : c;
  }
  return out + "\"";
}

struct Task {
  double value;
  std::size_t replicate;
};

std::vector<Task> tasks_for(const ExperimentConfig& config) {
  std::vector<Task> tasks;
  for (double v : config.grid_values())
    for (std::size_t r = 0; r < config.replicates; ++r) tasks.push_back({v, r});
  return tasks;
}

int worker_count(const ExperimentConfig& config) {
  return static_cast<int>(std::max<std::size_t>(config.workers, 1));
}

}  // namespace

// ---------------------------------------------------------------------------
// Configuration.

std::vector<double> ExperimentConfig::grid_values() const {
  if (!grid.empty()) return grid;
  const double v = family_parameter(family);
  return {std::isnan(v) ? 0.0 : v};
}

void ExperimentConfig::validate() const {
  auto fail = [](const std::string& field, const std::string& why) {
    throw std::invalid_argument("ExperimentConfig." + field + ": " + why);
  };
  if (n_a == 0 || n_b == 0) fail("n_a/n_b", "both must be >= 1");
  if (n_qubits() > 6) fail("n_a/n_b", "at most 6 qubits in total");
  if (family_dimension(family) != (std::size_t{1} << n_qubits())) {
    fail("family", "dimension " + std::to_string(family_dimension(family)) +
                       " does not match n_a + n_b = " + std::to_string(n_qubits()) + " qubits");
  }
  if (!(w >= 0.0 && w <= 1.0)) fail("w", "must lie in [0, 1]");
  if (replicates == 0) fail("replicates", "must be >= 1");
  if (workers == 0) fail("workers", "must be >= 1");
  if (!(control.total_time > 0.0) || control.pieces == 0) {
    fail("control", "need total_time > 0 and pieces >= 1");
  }
  if (!(control.u_min <= control.u_max)) fail("control", "u_min must not exceed u_max");
  try {
    es::EsConfig probe = es;
    probe.lower = control.u_min;
    probe.upper = control.u_max;
    probe.validate();
  } catch (const std::invalid_argument& e) {
    fail("es", e.what());
  }
  if (!grid.empty() && family_parameter_name(family).empty()) {
    fail("grid", "family '" + family_name(family) + "' has no sweepable parameter");
  }
  // Domain errors only; numerical failures such as overflow surface per
  // point at run time and are flagged in the results.
  for (double v : grid_values()) {
    try {
      (void)make_state(with_parameter(family, v));
    } catch (const std::overflow_error&) {
    } catch (const std::invalid_argument& e) {
      fail("grid", "value " + format_double(v) + ": " + e.what());
    }
  }
  if (const auto* mix = std::get_if<MixBlend>(&reference)) {
    if (const auto* fixed = std::get_if<FixedPr>(&mix->source)) {
      if (!(fixed->p_r >= 0.0 && fixed->p_r <= 1.0)) fail("reference", "p_r must lie in [0, 1]");
    }
    if (const auto* g = std::get_if<GridPr>(&mix->source)) {
      for (double c : g->candidates)
        if (!(c >= 0.0 && c <= 1.0)) fail("reference", "grid candidates must lie in [0, 1]");
    }
  }
}

es::EsConfig es_defaults_for(std::size_t n_qubits) {
  es::EsConfig c;
  if (n_qubits > 2) {
    c.population = 50;
    c.max_iterations = 3000;
  }
  return c;
}

StateFamilySpec make_family(std::string_view kind, std::size_t n_qubits,
                            std::optional<double> value, std::uint64_t family_seed) {
  if (n_qubits == 0 || n_qubits > 6) {
    throw std::invalid_argument("make_family: n_qubits must lie in [1, 6]");
  }
  const std::size_t dim = std::size_t{1} << n_qubits;
  if (kind == "thermal") return ThermalFamily{n_qubits, value.value_or(1.0)};
  if (kind == "werner") {
    if (n_qubits % 2 != 0) {
      throw std::invalid_argument("make_family: werner needs an even number of qubits");
    }
    return WernerFamily{std::size_t{1} << (n_qubits / 2), value.value_or(0.0)};
  }
  if (kind == "blended") return BlendedFamily{dim, value.value_or(0.5), family_seed};
  if (kind == "haar_pure") return HaarPureFamily{dim, family_seed};
  if (kind == "maximally_mixed") return MaximallyMixedFamily{dim};
  if (kind == "basis_zero") return BasisZeroFamily{dim};
  throw std::invalid_argument("make_family: unknown family '" + std::string(kind) + "'");
}

ReferenceStrategy parse_reference(std::string_view ref, std::string_view pr) {
  if (ref == "trash") return TrashClone{};
  if (ref == "pure") return PureZero{};
  if (ref != "mix") throw std::invalid_argument("unknown reference '" + std::string(ref) + "'");
  if (pr == "grid") return MixBlend{GridPr{}};
  if (pr == "bound") return MixBlend{BoundPr{}};
  if (pr == "guess") return MixBlend{GuessPr{}};
  const double p = parse_number(pr, "p_r");
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("p_r must lie in [0, 1]");
  return MixBlend{FixedPr{p}};
}

ReferenceStrategy reference_from_description(std::string_view text,
                                             const std::vector<double>& grid_candidates) {
  if (text.starts_with("mix:")) {
    auto strategy = parse_reference("mix", text.substr(4));
    auto& mix = std::get<MixBlend>(strategy);
    if (auto* grid = std::get_if<GridPr>(&mix.source)) grid->candidates = grid_candidates;
    return strategy;
  }
  return parse_reference(text);
}

std::vector<double> default_grid(const StateFamilySpec& family) {
  const std::string param = family_parameter_name(family);
  if (param == "beta") return parse_grid("0.2:2.0:0.2");
  if (param == "alpha") return parse_grid("-1:1:0.2");
  if (param == "p0") return parse_grid("0:1:0.1");
  return {0.0};
}

std::vector<double> parse_grid(std::string_view text) {
  std::vector<double> values;
  if (text.find(',') != std::string_view::npos) {
    std::size_t start = 0;
    while (start <= text.size()) {
      const auto end = std::min(text.find(',', start), text.size());
      values.push_back(snap(parse_number(text.substr(start, end - start), "grid")));
      start = end + 1;
    }
    return values;
  }
  const auto c1 = text.find(':');
  if (c1 == std::string_view::npos) return {snap(parse_number(text, "grid"))};
  const auto c2 = text.find(':', c1 + 1);
  if (c2 == std::string_view::npos || text.find(':', c2 + 1) != std::string_view::npos) {
    throw std::invalid_argument("grid '" + std::string(text) + "' is not start:stop:step");
  }
  const double first = parse_number(text.substr(0, c1), "grid start");
  const double last = parse_number(text.substr(c1 + 1, c2 - c1 - 1), "grid stop");
  const double step = parse_number(text.substr(c2 + 1), "grid step");
  if (!(step > 0.0) || last < first) {
    throw std::invalid_argument("grid '" + std::string(text) + "' needs step > 0 and stop >= start");
  }
  const auto count = static_cast<std::size_t>(std::floor((last - first) / step + 1e-9)) + 1;
  if (count > 100000) throw std::invalid_argument("grid has more than 100000 points");
  for (std::size_t i = 0; i < count; ++i) values.push_back(snap(first + static_cast<double>(i) * step));
  return values;
}

json to_json(const ExperimentConfig& c) {
  json j{{"schema_version", kConfigSchemaVersion},
         {"family", family_to_json(c.family)},
         {"n_a", c.n_a},
         {"n_b", c.n_b},
         {"w", c.w},
         {"reference", reference_to_json(c.reference)},
         {"es", es_to_json(c.es)},
         {"control",
          {{"total_time", c.control.total_time},
           {"pieces", c.control.pieces},
           {"u_min", c.control.u_min},
           {"u_max", c.control.u_max}}},
         {"fidelity", std::string(to_string(c.fidelity))},
         {"replicates", c.replicates},
         {"seed", c.seed},
         {"workers", c.workers},
         {"out", c.out.string()},
         {"probe_every", c.probe_every}};
  if (!c.grid.empty()) j["grid"] = c.grid;
  return j;
}

ExperimentConfig config_from_json(const json& j) {
  require_keys(j,
               {"schema_version", "family", "grid", "n_a", "n_b", "w", "reference", "es",
                "control", "fidelity", "replicates", "seed", "workers", "out", "probe_every"},
               "config");
  if (j.contains("schema_version") && j.at("schema_version").get<int>() != kConfigSchemaVersion) {
    throw std::invalid_argument("config: unsupported schema_version " +
                                j.at("schema_version").dump());
  }
  ExperimentConfig c;
  if (j.contains("n_a")) c.n_a = j.at("n_a").get<std::size_t>();
  if (j.contains("n_b")) c.n_b = j.at("n_b").get<std::size_t>();
  c.family = j.contains("family") ? family_from_json(j.at("family"), c.n_qubits())
                                  : make_family("thermal", c.n_qubits());
  if (j.contains("grid")) {
    const auto& g = j.at("grid");
    c.grid = g.is_string() ? parse_grid(g.get<std::string>()) : g.get<std::vector<double>>();
  }
  if (j.contains("w")) c.w = j.at("w").get<double>();
  if (j.contains("reference")) c.reference = reference_from_json(j.at("reference"));
  c.es = es_defaults_for(c.n_qubits());
  if (j.contains("es")) es_from_json(j.at("es"), c.es);
  if (j.contains("control")) {
    const auto& cj = j.at("control");
    require_keys(cj, {"total_time", "pieces", "u_min", "u_max"}, "control");
    if (cj.contains("total_time")) c.control.total_time = cj.at("total_time").get<double>();
    if (cj.contains("pieces")) c.control.pieces = cj.at("pieces").get<std::size_t>();
    if (cj.contains("u_min")) c.control.u_min = cj.at("u_min").get<double>();
    if (cj.contains("u_max")) c.control.u_max = cj.at("u_max").get<double>();
  }
  if (j.contains("fidelity")) {
    c.fidelity = parse_fidelity_convention(j.at("fidelity").get<std::string>());
  }
  if (j.contains("replicates")) c.replicates = j.at("replicates").get<std::size_t>();
  if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("workers")) c.workers = j.at("workers").get<std::size_t>();
  if (j.contains("out")) c.out = j.at("out").get<std::string>();
  if (j.contains("probe_every")) c.probe_every = j.at("probe_every").get<std::size_t>();
  c.validate();
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw std::invalid_argument("config " + path.string() + ": " + e.what());
  }
  return config_from_json(j);
}

std::uint64_t derive_seed(std::uint64_t master, std::string_view family, double value,
                          std::size_t replicate) {
  const double v = value == 0.0 ? 0.0 : value;  // fold -0 onto +0
  return hash_words({master, hash_string(family), std::bit_cast<std::uint64_t>(v),
                     static_cast<std::uint64_t>(replicate)});
}

// ---------------------------------------------------------------------------
// Records.

json to_json(const ResultRecord& r) {
  json j{{"row_kind", r.row_kind},
         {"family", r.family},
         {"parameter", r.parameter},
         {"value", r.value},
         {"n_qubits", r.n_qubits},
         {"w", r.w},
         {"strategy", r.strategy},
         {"p_r_used", r.p_r_used ? json(*r.p_r_used) : json(nullptr)},
         {"j_pure", r.j_pure},
         {"j_qmi", r.j_qmi},
         {"j_e", r.j_e},
         {"j_d", r.j_d},
         {"bound", r.bound},
         {"seed", r.seed},
         {"replicate", r.replicate},
         {"iterations", r.iterations},
         {"wall_seconds", r.wall_seconds},
         {"failed", r.failed}};
  if (r.failed) j["error"] = r.error;
  return j;
}

ResultRecord record_from_json(const json& j) {
  ResultRecord r;
  j.at("row_kind").get_to(r.row_kind);
  j.at("family").get_to(r.family);
  j.at("parameter").get_to(r.parameter);
  j.at("value").get_to(r.value);
  j.at("n_qubits").get_to(r.n_qubits);
  j.at("w").get_to(r.w);
  j.at("strategy").get_to(r.strategy);
  if (!j.at("p_r_used").is_null()) r.p_r_used = j.at("p_r_used").get<double>();
  j.at("j_pure").get_to(r.j_pure);
  j.at("j_qmi").get_to(r.j_qmi);
  j.at("j_e").get_to(r.j_e);
  j.at("j_d").get_to(r.j_d);
  j.at("bound").get_to(r.bound);
  j.at("seed").get_to(r.seed);
  j.at("replicate").get_to(r.replicate);
  j.at("iterations").get_to(r.iterations);
  j.at("wall_seconds").get_to(r.wall_seconds);
  j.at("failed").get_to(r.failed);
  if (j.contains("error")) j.at("error").get_to(r.error);
  return r;
}

std::string trace_jsonl(const es::TrainingTrace& trace) {
  std::string out;
  for (const auto& t : trace.records) {
    json j{{"iteration", t.iteration}, {"phi", t.phi}, {"best_phi", t.best_phi}, {"delta", t.delta}};
    if (t.j_pure) j["j_pure"] = *t.j_pure;
    if (t.j_qmi) j["j_qmi"] = *t.j_qmi;
    if (t.j_d) j["j_d"] = *t.j_d;
    out += j.dump();
    out += '\n';
  }
  return out;
}

void write_text(const std::filesystem::path& path, std::string_view text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

// ---------------------------------------------------------------------------
// Runs.

RunOutcome execute_run(const ExperimentConfig& config, double value, std::size_t replicate) {
  config.validate();
  const auto start = Clock::now();
  auto trained = train_encoder(config, value, replicate, config.reference);
  const auto result = compress(trained.problem, trained.encoder, config.reference, config.fidelity);

  RunOutcome out;
  out.record = blank_record(config, value, replicate, trained.seed);
  out.record.p_r_used = result.p_r_used;
  out.record.j_pure = result.j_pure;
  out.record.j_qmi = result.j_qmi;
  out.record.j_e = result.j_e;
  out.record.j_d = result.j_d;
  out.record.bound = result.bound;
  out.record.iterations = trained.training.iterations;
  out.record.wall_seconds = seconds_since(start);
  out.trace = std::move(trained.training.trace);
  out.theta = std::move(trained.training.theta_star);
  return out;
}

RunOutcome run_single(const ExperimentConfig& config) {
  config.validate();
  const double value = config.grid_values().front();
  const auto start = Clock::now();
  RunOutcome run;
  try {
    run = execute_run(config, value, 0);
  } catch (const es::TrainingAborted& e) {
    if (!config.out.empty()) {
      write_text(config.out / "run.trace.jsonl", trace_jsonl(e.partial_trace()));
    }
    throw;
  }
  if (!config.out.empty()) {
    json manifest = manifest_header(config, "train", seconds_since(start));
    manifest["runs"].push_back(run_entry(config, run));
    write_text(config.out / "run.manifest.json", manifest.dump(2) + "\n");
    write_text(config.out / "run.trace.jsonl", trace_jsonl(run.trace));
  }
  return run;
}

std::vector<ResultRecord> aggregate(const std::vector<ResultRecord>& runs) {
  std::vector<double> order;
  std::map<double, std::vector<const ResultRecord*>> groups;
  for (const auto& r : runs) {
    if (r.row_kind != "run") continue;
    if (!groups.contains(r.value)) order.push_back(r.value);
    auto& g = groups[r.value];
    if (!r.failed) g.push_back(&r);
  }
  std::vector<ResultRecord> rows;
  for (double v : order) {
    const auto& members = groups[v];
    const auto proto_it = std::find_if(runs.begin(), runs.end(),
                                       [&](const ResultRecord& r) { return r.value == v; });
    ResultRecord proto = *proto_it;
    proto.seed = 0;
    proto.replicate = members.size();
    proto.failed = false;
    proto.error.clear();
    if (members.empty()) {
      proto.row_kind = "mean";
      proto.failed = true;
      proto.error = "no successful replicates";
      rows.push_back(proto);
      continue;
    }
    auto fold = [&](const char* kind, auto&& combine) {
      ResultRecord out = proto;
      out.row_kind = kind;
      auto pick = [&](auto field) {
        std::vector<double> xs;
        for (const auto* m : members) xs.push_back(field(*m));
        return combine(xs);
      };
      out.j_pure = pick([](const ResultRecord& r) { return r.j_pure; });
      out.j_qmi = pick([](const ResultRecord& r) { return r.j_qmi; });
      out.j_e = pick([](const ResultRecord& r) { return r.j_e; });
      out.j_d = pick([](const ResultRecord& r) { return r.j_d; });
      out.bound = pick([](const ResultRecord& r) { return r.bound; });
      out.wall_seconds = pick([](const ResultRecord& r) { return r.wall_seconds; });
      out.iterations = static_cast<std::size_t>(
          std::llround(pick([](const ResultRecord& r) { return static_cast<double>(r.iterations); })));
      const bool all_pr = std::all_of(members.begin(), members.end(),
                                      [](const ResultRecord* r) { return r->p_r_used.has_value(); });
      out.p_r_used = all_pr ? std::optional<double>(pick([](const ResultRecord& r) {
                                return *r.p_r_used;
                              }))
                            : std::nullopt;
      rows.push_back(out);
    };
    fold("mean", [](const std::vector<double>& xs) {
      double s = 0.0;
      for (double x : xs) s += x;
      return s / static_cast<double>(xs.size());
    });
    fold("min", [](const std::vector<double>& xs) { return *std::min_element(xs.begin(), xs.end()); });
    fold("max", [](const std::vector<double>& xs) { return *std::max_element(xs.begin(), xs.end()); });
  }
  return rows;
}

std::string csv_header() {
  return "row_kind,status,family,parameter,value,n_qubits,w,strategy,p_r_used,j_pure,j_qmi,j_e,"
         "j_d,bound,seed,replicate,iterations,wall_seconds,error";
}

std::string csv_row(const ResultRecord& r) {
  std::ostringstream os;
  auto metric = [&](double v) { return r.failed ? std::string() : format_double(v); };
  os << r.row_kind << ',' << (r.failed ? "failed" : "ok") << ',' << r.family << ',' << r.parameter
     << ',' << format_double(r.value) << ',' << r.n_qubits << ',' << format_double(r.w) << ','
     << csv_field(r.strategy) << ',' << (r.p_r_used && !r.failed ? format_double(*r.p_r_used) : "")
     << ',' << metric(r.j_pure) << ',' << metric(r.j_qmi) << ',' << metric(r.j_e) << ','
     << metric(r.j_d) << ',' << metric(r.bound) << ',' << r.seed << ',' << r.replicate << ','
     << r.iterations << ',' << format_double(r.wall_seconds) << ',' << csv_field(r.error);
  return os.str();
}

std::string results_csv(const std::vector<ResultRecord>& runs,
                        const std::vector<ResultRecord>& aggregates) {
  std::string out = "# qaemix results schema=" + std::to_string(kCsvSchemaVersion) + "\n";
  out += csv_header() + "\n";
  for (const auto& r : runs) out += csv_row(r) + "\n";
  for (const auto& r : aggregates) out += csv_row(r) + "\n";
  return out;
}

SweepResult run_sweep(const ExperimentConfig& config) {
  config.validate();
  const auto start = Clock::now();
  const auto tasks = tasks_for(config);
  std::vector<RunOutcome> runs(tasks.size());

  // Each task owns its slot and trace shard; merging below is sequential.
#pragma omp parallel for schedule(dynamic) num_threads(worker_count(config))
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(tasks.size()); ++i) {
    const auto& task = tasks[static_cast<std::size_t>(i)];
    auto& slot = runs[static_cast<std::size_t>(i)];
    try {
      slot = execute_run(config, task.value, task.replicate);
    } catch (const std::exception& e) {
      const auto seed = derive_seed(config.seed, family_name(config.family), task.value, task.replicate);
      slot.record = blank_record(config, task.value, task.replicate, seed);
      slot.record.failed = true;
      slot.record.error = e.what();
      if (const auto* aborted = dynamic_cast<const es::TrainingAborted*>(&e)) {
        slot.trace = aborted->partial_trace();
      }
    }
    if (!config.out.empty()) {
      try {
        write_text(config.out / "traces" / (run_stem(config, task.value, task.replicate) + ".jsonl"),
                   trace_jsonl(slot.trace));
      } catch (const std::exception& e) {
        slot.record.failed = true;
        slot.record.error = e.what();
      }
    }
  }

  SweepResult result;
  std::vector<ResultRecord> records;
  for (const auto& r : runs) records.push_back(r.record);
  result.aggregates = aggregate(records);
  result.manifest = manifest_header(config, "sweep", seconds_since(start));
  for (const auto& r : runs) result.manifest["runs"].push_back(run_entry(config, r));
  if (!config.out.empty()) {
    write_text(config.out / "sweep.csv", results_csv(records, result.aggregates));
    write_text(config.out / "manifest.json", result.manifest.dump(2) + "\n");
  }
  result.runs = std::move(runs);
  return result;
}

std::string comparison_csv(const std::vector<StrategyComparison>& rows) {
  std::string out = "# qaemix compare schema=" + std::to_string(kCsvSchemaVersion) + "\n";
  out += "status,value,replicate,seed,bound,grid_p_r,grid_j_d,bound_p_r,bound_j_d,guess_p_r,"
         "guess_j_d,iterations,error\n";
  for (const auto& r : rows) {
    auto metric = [&](double v) { return r.failed ? std::string() : format_double(v); };
    out += std::string(r.failed ? "failed" : "ok") + ',' + format_double(r.value) + ',' +
           std::to_string(r.replicate) + ',' + std::to_string(r.seed) + ',' + metric(r.bound) +
           ',' + metric(r.grid_p_r) + ',' + metric(r.grid_j_d) + ',' + metric(r.bound_p_r) + ',' +
           metric(r.bound_j_d) + ',' + metric(r.guess_p_r) + ',' + metric(r.guess_j_d) + ',' +
           std::to_string(r.iterations) + ',' + csv_field(r.error) + "\n";
  }
  return out;
}

ComparisonResult compare_strategies(const ExperimentConfig& config) {
  config.validate();
  if (!std::holds_alternative<MixBlend>(config.reference)) {
    throw std::invalid_argument("compare_strategies: reference must be 'mix'");
  }
  const auto start = Clock::now();
  const auto tasks = tasks_for(config);
  const auto candidates = grid_candidates_of(config.reference);
  const ReferenceStrategy grid_ref = MixBlend{GridPr{candidates}};
  std::vector<StrategyComparison> rows(tasks.size());
  std::vector<RunOutcome> runs(tasks.size());

#pragma omp parallel for schedule(dynamic) num_threads(worker_count(config))
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(tasks.size()); ++i) {
    const auto& task = tasks[static_cast<std::size_t>(i)];
    auto& row = rows[static_cast<std::size_t>(i)];
    auto& run = runs[static_cast<std::size_t>(i)];
    row.value = task.value;
    row.replicate = task.replicate;
    row.seed = derive_seed(config.seed, family_name(config.family), task.value, task.replicate);
    ExperimentConfig as_grid = config;
    as_grid.reference = grid_ref;
    run.record = blank_record(as_grid, task.value, task.replicate, row.seed);
    try {
      const auto t0 = Clock::now();
      auto trained = train_encoder(config, task.value, task.replicate, grid_ref);
      const auto conv = config.fidelity;
      const auto g = compress(trained.problem, trained.encoder, grid_ref, conv);
      const auto b = compress(trained.problem, trained.encoder, MixBlend{BoundPr{}}, conv);
      const auto q = compress(trained.problem, trained.encoder, MixBlend{GuessPr{}}, conv);
      row.bound = g.bound;
      row.grid_p_r = *g.p_r_used;
      row.grid_j_d = g.j_d;
      row.bound_p_r = *b.p_r_used;
      row.bound_j_d = b.j_d;
      row.guess_p_r = *q.p_r_used;
      row.guess_j_d = q.j_d;
      row.iterations = trained.training.iterations;

      auto& rec = run.record;
      rec.p_r_used = g.p_r_used;
      rec.j_pure = g.j_pure;
      rec.j_qmi = g.j_qmi;
      rec.j_e = g.j_e;
      rec.j_d = g.j_d;
      rec.bound = g.bound;
      rec.iterations = trained.training.iterations;
      rec.wall_seconds = seconds_since(t0);
      run.trace = std::move(trained.training.trace);
      run.theta = std::move(trained.training.theta_star);
    } catch (const std::exception& e) {
      row.failed = run.record.failed = true;
      row.error = run.record.error = e.what();
    }
  }

  ComparisonResult result;
  result.manifest = manifest_header(config, "compare-pr", seconds_since(start));
  ExperimentConfig as_grid = config;
  as_grid.reference = grid_ref;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    json entry = run_entry(as_grid, runs[i]);
    if (!rows[i].failed) {
      entry["strategies"] = {
          {"grid", {{"p_r", rows[i].grid_p_r}, {"j_d", rows[i].grid_j_d}}},
          {"bound", {{"p_r", rows[i].bound_p_r}, {"j_d", rows[i].bound_j_d}}},
          {"guess", {{"p_r", rows[i].guess_p_r}, {"j_d", rows[i].guess_j_d}}}};
    }
    result.manifest["runs"].push_back(entry);
  }
  if (!config.out.empty()) {
    write_text(config.out / "compare.csv", comparison_csv(rows));
    write_text(config.out / "manifest.json", result.manifest.dump(2) + "\n");
  }
  result.rows = std::move(rows);
  return result;
}

std::vector<ReplayCheck> replay(const json& manifest) {
  if (manifest.at("schema_version").get<int>() != kManifestSchemaVersion) {
    throw std::invalid_argument("replay: unsupported manifest schema_version " +
                                manifest.at("schema_version").dump());
  }
  const auto config = config_from_json(manifest.at("config"));
  const auto system = SpinChainSystem::heisenberg(config.n_qubits());
  const auto candidates = grid_candidates_of(config.reference);
  std::vector<ReplayCheck> checks;
  for (const auto& run : manifest.at("runs")) {
    if (run.at("status").get<std::string>() != "ok") continue;
    ReplayCheck check;
    check.value = run.at("value").get<double>();
    check.replicate = run.at("replicate").get<std::size_t>();
    check.recorded_j_d = run.at("record").at("j_d").get<double>();
    const auto family = with_parameter(config.family, check.value);
    QaeProblem problem(config.n_a, config.n_b, make_state(family), config.w);
    const auto encoder = propagate(system, schedule_from_json(run.at("schedule")));
    const auto strategy =
        reference_from_description(run.at("reference").get<std::string>(), candidates);
    check.replayed_j_d = compress(problem, encoder, strategy, config.fidelity).j_d;
    checks.push_back(check);
  }
  return checks;
}

}  // namespace qaemix::experiment
