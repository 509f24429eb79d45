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
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "qaemix/rng.hpp"

namespace qaemix::es {

/// How population scores are centred before weighting the perturbations.
/// None is the plain score-weighted estimator (1 / (NP delta)) sum Phi_i eps_i.
/// Mean subtracts the population mean and divides by (NP - 1) delta instead,
/// which keeps the estimator unbiased and removes the Phi/(sqrt(NP) delta)
/// noise floor.
enum class FitnessBaseline { None, Mean };

FitnessBaseline parse_baseline(std::string_view name);
std::string_view to_string(FitnessBaseline baseline);

struct EsConfig {
  std::size_t population = 40;  // NP
  double delta = 0.01;          // perturbation scale
  double learning_rate = 0.5;   // chi_1
  double momentum = 0.9;        // chi_2
  double decay_factor = 0.98;
  std::size_t decay_period = 100;
  std::size_t max_iterations = 1500;
  std::size_t convergence_window = 200;
  double convergence_tolerance = 1e-6;
  std::uint64_t seed = 0;
  double lower = -10.0;
  double upper = 10.0;
  FitnessBaseline baseline = FitnessBaseline::Mean;

  /// Throws std::invalid_argument on NP < 2, delta <= 0, chi_1 <= 0,
  /// chi_2 outside [0, 1) or unordered bounds.
  void validate() const;
};

using Objective = std::function<double(std::span<const double>)>;

/// lower + U[0,1) * (upper - lower), deterministic in config.seed.
std::vector<double> init_theta(const EsConfig& config, std::size_t dim);

/// Standard-normal perturbation of one individual. Each (seed, iteration,
/// individual) triple owns an independent counter-based stream.
std::vector<double> perturbation(const EsConfig& config, std::size_t iteration,
                                 std::size_t individual, std::size_t dim);

struct GradientEstimate {
  std::vector<double> gradient;
  std::vector<double> scores;  // Phi(X_i), i = 0..NP-1
};

/// Score-weighted sum of eps_i (see FitnessBaseline) with
/// X_i = clamp(theta + delta eps_i).
/// Population members are evaluated in parallel; the result is bit-identical
/// to estimate_gradient_serial.
GradientEstimate estimate_gradient(const Objective& objective, std::span<const double> theta,
                                   double delta, std::size_t iteration, const EsConfig& config);

/// Single-threaded reference for estimate_gradient.
GradientEstimate estimate_gradient_serial(const Objective& objective,
                                          std::span<const double> theta, double delta,
                                          std::size_t iteration, const EsConfig& config);

struct EsState {
  std::vector<double> theta;     // mean vector
  std::vector<double> velocity;  // momentum dv
  double delta;
  std::size_t iteration = 0;
};

EsState initial_state(const EsConfig& config, std::size_t dim);

/// dv <- chi_2 dv + (1 - chi_2) g; theta <- clamp(theta + chi_1 dv). Decays
/// delta each time the iteration count reaches a multiple of decay_period.
EsState step(EsState state, std::span<const double> gradient, const EsConfig& config);

struct TraceRecord {
  std::size_t iteration = 0;
  double phi = 0.0;       // objective at the mean vector
  double best_phi = 0.0;  // best-so-far, non-decreasing
  double delta = 0.0;
  std::optional<double> j_pure;
  std::optional<double> j_qmi;
  std::optional<double> j_d;
};

struct TrainingTrace {
  std::vector<TraceRecord> records;
};

struct TrainResult {
  std::vector<double> theta_star;  // best-ever mean vector
  double best_phi = 0.0;
  std::size_t iterations = 0;      // gradient steps taken
  bool converged = false;          // stopped by the plateau rule
  TrainingTrace trace;
};

/// Optional per-iteration hook to fill the observational trace fields.
using IterationObserver = std::function<void(TraceRecord&, std::span<const double> theta)>;

class TrainingAborted : public std::runtime_error {
public:
  TrainingAborted(const std::string& what, TrainingTrace partial)
      : std::runtime_error(what), partial_(std::move(partial)) {}
  const TrainingTrace& partial_trace() const noexcept { return partial_; }

private:
  TrainingTrace partial_;
};

/// Runs init -> {evaluate mean, estimate, step} until max_iterations or until
/// the best objective improves by less than convergence_tolerance over
/// convergence_window iterations.
TrainResult train(const Objective& objective, std::size_t dim, const EsConfig& config,
                  const IterationObserver& observer = {});

}  // namespace qaemix::es
