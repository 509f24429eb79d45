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

#include "qaemix/es.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <random>
#include <string>

namespace qaemix::es {

namespace {

constexpr std::uint64_t kInitStream = 0x1417;
constexpr std::uint64_t kNoiseStream = 0x7e57;

double clamp_to(const EsConfig& c, double x) { return std::clamp(x, c.lower, c.upper); }

std::vector<double> mutant(std::span<const double> theta, std::span<const double> eps,
                           double delta, const EsConfig& config) {
  std::vector<double> x(theta.size());
  for (std::size_t k = 0; k < theta.size(); ++k) x[k] = clamp_to(config, theta[k] + delta * eps[k]);
  return x;
}

// Reduction shared by the serial and parallel paths, in fixed order.
GradientEstimate combine(const std::vector<std::vector<double>>& noise, std::vector<double> scores,
                         double delta, const EsConfig& config) {
  const std::size_t np = scores.size();
  const std::size_t dim = noise.empty() ? 0 : noise.front().size();
  double centre = 0.0;
  if (config.baseline == FitnessBaseline::Mean) {
    for (double s : scores) centre += s;
    centre /= static_cast<double>(np);
  }
  std::vector<double> g(dim, 0.0);
  for (std::size_t i = 0; i < np; ++i) {
    const double w = scores[i] - centre;
    for (std::size_t k = 0; k < dim; ++k) g[k] += w * noise[i][k];
  }
  // Centring on the sample mean costs one degree of freedom.
  const double dof = config.baseline == FitnessBaseline::Mean ? static_cast<double>(np - 1)
                                                               : static_cast<double>(np);
  const double scale = 1.0 / (dof * delta);
  for (double& v : g) v *= scale;
  return {std::move(g), std::move(scores)};
}

void require_finite_score(double s, std::size_t individual) {
  if (!std::isfinite(s)) {
    throw std::domain_error("objective returned a non-finite value for individual " +
                            std::to_string(individual));
  }
}

}  // namespace

FitnessBaseline parse_baseline(std::string_view name) {
  if (name == "none") return FitnessBaseline::None;
  if (name == "mean") return FitnessBaseline::Mean;
  throw std::invalid_argument("unknown fitness baseline '" + std::string(name) + "'");
}

std::string_view to_string(FitnessBaseline baseline) {
  return baseline == FitnessBaseline::None ? "none" : "mean";
}

void EsConfig::validate() const {
  if (population < 2) throw std::invalid_argument("EsConfig: population must be >= 2");
  if (!(delta > 0.0)) throw std::invalid_argument("EsConfig: delta must be > 0");
  if (!(learning_rate > 0.0)) throw std::invalid_argument("EsConfig: learning_rate must be > 0");
  if (!(momentum >= 0.0 && momentum < 1.0))
    throw std::invalid_argument("EsConfig: momentum must lie in [0, 1)");
  if (!(lower <= upper)) throw std::invalid_argument("EsConfig: bounds are not ordered");
  if (!(decay_factor > 0.0)) throw std::invalid_argument("EsConfig: decay_factor must be > 0");
  if (decay_period == 0) throw std::invalid_argument("EsConfig: decay_period must be >= 1");
}

std::vector<double> init_theta(const EsConfig& config, std::size_t dim) {
  CounterRng rng(hash_words({config.seed, kInitStream}));
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> theta(dim);
  for (auto& v : theta) v = config.lower + unit(rng) * (config.upper - config.lower);
  return theta;
}

std::vector<double> perturbation(const EsConfig& config, std::size_t iteration,
                                 std::size_t individual, std::size_t dim) {
  CounterRng rng(hash_words({config.seed, kNoiseStream, iteration, individual}));
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> eps(dim);
  for (auto& v : eps) v = normal(rng);
  return eps;
}

GradientEstimate estimate_gradient_serial(const Objective& objective,
                                          std::span<const double> theta, double delta,
                                          std::size_t iteration, const EsConfig& config) {
  const std::size_t np = config.population;
  std::vector<std::vector<double>> noise(np);
  std::vector<double> scores(np);
  for (std::size_t i = 0; i < np; ++i) {
    noise[i] = perturbation(config, iteration, i, theta.size());
    scores[i] = objective(mutant(theta, noise[i], delta, config));
    require_finite_score(scores[i], i);
  }
  return combine(noise, std::move(scores), delta, config);
}

GradientEstimate estimate_gradient(const Objective& objective, std::span<const double> theta,
                                   double delta, std::size_t iteration, const EsConfig& config) {
  const auto np = static_cast<std::ptrdiff_t>(config.population);
  std::vector<std::vector<double>> noise(config.population);
  std::vector<double> scores(config.population);
  std::exception_ptr failure;

#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < np; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    try {
      noise[idx] = perturbation(config, iteration, idx, theta.size());
      scores[idx] = objective(mutant(theta, noise[idx], delta, config));
    } catch (...) {
#pragma omp critical(qaemix_es_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  for (std::size_t i = 0; i < scores.size(); ++i) require_finite_score(scores[i], i);
  return combine(noise, std::move(scores), delta, config);
}

EsState initial_state(const EsConfig& config, std::size_t dim) {
  return {init_theta(config, dim), std::vector<double>(dim, 0.0), config.delta, 0};
}

EsState step(EsState state, std::span<const double> gradient, const EsConfig& config) {
  if (gradient.size() != state.theta.size()) {
    throw std::invalid_argument("es::step: gradient has " + std::to_string(gradient.size()) +
                                " entries, theta has " + std::to_string(state.theta.size()));
  }
  for (std::size_t k = 0; k < state.theta.size(); ++k) {
    state.velocity[k] = config.momentum * state.velocity[k] + (1.0 - config.momentum) * gradient[k];
    state.theta[k] = clamp_to(config, state.theta[k] + config.learning_rate * state.velocity[k]);
  }
  ++state.iteration;
  if (state.iteration % config.decay_period == 0) state.delta *= config.decay_factor;
  return state;
}

TrainResult train(const Objective& objective, std::size_t dim, const EsConfig& config,
                  const IterationObserver& observer) {
  config.validate();
  EsState state = initial_state(config, dim);
  TrainResult result;
  result.theta_star = state.theta;
  result.best_phi = -std::numeric_limits<double>::infinity();

  for (std::size_t t = 0;; ++t) {
    TraceRecord record;
    record.iteration = t;
    record.delta = state.delta;
    try {
      record.phi = objective(state.theta);
      require_finite_score(record.phi, 0);
    } catch (const std::exception& e) {
      throw TrainingAborted(std::string("training aborted at iteration ") + std::to_string(t) +
                                ": " + e.what(),
                            result.trace);
    }
    if (record.phi > result.best_phi) {
      result.best_phi = record.phi;
      result.theta_star = state.theta;
    }
    record.best_phi = result.best_phi;
    if (observer) observer(record, state.theta);
    result.trace.records.push_back(record);

    if (t >= config.max_iterations) break;
    const auto& recs = result.trace.records;
    if (config.convergence_window > 0 && t >= config.convergence_window) {
      const double gain = recs[t].best_phi - recs[t - config.convergence_window].best_phi;
      if (gain < config.convergence_tolerance) {
        result.converged = true;
        break;
      }
    }

    GradientEstimate estimate;
    try {
      estimate = estimate_gradient(objective, state.theta, state.delta, state.iteration, config);
    } catch (const std::exception& e) {
      throw TrainingAborted(std::string("training aborted at iteration ") + std::to_string(t) +
                                ": " + e.what(),
                            result.trace);
    }
    state = step(std::move(state), estimate.gradient, config);
    result.iterations = state.iteration;
  }
  return result;
}

}  // namespace qaemix::es
