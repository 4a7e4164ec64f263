// Copyright 2026 The romc Authors
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

#include <romc/model.hpp>

#include <atomic>
#include <cmath>
#include <iostream>
#include <limits>
#include <sstream>

namespace romc {

namespace {
std::atomic<bool> g_warnings_enabled{true};

double probe_step(double step, double coordinate) {
  return step * std::max(1.0, std::abs(coordinate));
}
}  // namespace

void warn(const std::string& message) {
  if (g_warnings_enabled.load(std::memory_order_relaxed)) {
    std::cerr << "[romc warning] " << message << '\n';
  }
}

void set_warnings_enabled(bool enabled) { g_warnings_enabled.store(enabled, std::memory_order_relaxed); }

double Prior::density(const ParameterPoint& theta) const {
  const double lp = log_density(theta);
  return std::isinf(lp) && lp < 0 ? 0.0 : std::exp(lp);
}

bool Prior::in_bounds(const ParameterPoint& theta) const {
  const auto& b = bounds();
  if (static_cast<std::size_t>(theta.size()) != b.size()) {
    return false;
  }
  for (std::size_t m = 0; m < b.size(); ++m) {
    const double x = theta[static_cast<Eigen::Index>(m)];
    if (!(x >= b[m].low && x <= b[m].high)) {
      return false;
    }
  }
  return true;
}

ParameterPoint Prior::clip(ParameterPoint theta) const {
  const auto& b = bounds();
  for (std::size_t m = 0; m < b.size(); ++m) {
    auto& x = theta[static_cast<Eigen::Index>(m)];
    x = std::clamp(x, b[m].low, b[m].high);
  }
  return theta;
}

UniformPrior::UniformPrior(std::vector<Interval> bounds) : bounds_(std::move(bounds)) {
  if (bounds_.empty()) {
    throw InvalidArgument("uniform prior needs at least one dimension");
  }
  for (const auto& b : bounds_) {
    if (!(std::isfinite(b.low) && std::isfinite(b.high) && b.low < b.high)) {
      throw InvalidArgument("uniform prior bounds must be finite with low < high");
    }
    log_volume_ += std::log(b.width());
  }
}

double UniformPrior::log_density(const ParameterPoint& theta) const {
  return in_bounds(theta) ? -log_volume_ : -std::numeric_limits<double>::infinity();
}

ParameterPoint UniformPrior::sample(std::mt19937_64& rng) const {
  ParameterPoint theta(static_cast<Eigen::Index>(bounds_.size()));
  for (std::size_t m = 0; m < bounds_.size(); ++m) {
    std::uniform_real_distribution<double> u(bounds_[m].low, bounds_[m].high);
    theta[static_cast<Eigen::Index>(m)] = u(rng);
  }
  return theta;
}

SummaryFunction identity_summary(std::size_t dimension) {
  return SummaryFunction{dimension, [](const Vector& y) { return y; }};
}

double squared_euclidean(const Vector& a, const Vector& b) { return (a - b).squaredNorm(); }

DeterministicObjective::DeterministicObjective(std::shared_ptr<const Model> model, Vector observed_summary,
                                               Seed seed, std::size_t index)
    : model_(std::move(model)), observed_summary_(std::move(observed_summary)), seed_(seed), index_(index) {}

Vector DeterministicObjective::summaries(const ParameterPoint& theta) const {
  return model_->summary.apply(model_->simulator.run(theta, seed_));
}

double DeterministicObjective::operator()(const ParameterPoint& theta) const {
  const Vector s = summaries(theta);
  if (model_->distance) {
    return (*model_->distance)(s, observed_summary_);
  }
  return squared_euclidean(s, observed_summary_);
}

std::vector<Seed> draw_nuisance_seeds(std::size_t n1, Seed master_seed) {
  if (n1 == 0) {
    throw InvalidArgument("draw_nuisance_seeds: n1 must be at least 1");
  }
  std::mt19937_64 rng(master_seed);
  std::uniform_int_distribution<Seed> dist(1, (Seed{1} << 32) - 1);
  std::vector<Seed> seeds(n1);
  for (auto& s : seeds) {
    s = dist(rng);
  }
  return seeds;
}

DeterministicObjective make_objective(const std::shared_ptr<const Model>& model, const Vector& observed,
                                      Seed seed, std::size_t index) {
  if (!model || !model->prior || !model->simulator.run || !model->summary.apply) {
    throw InvalidArgument("make_objective: incomplete model");
  }
  if (static_cast<std::size_t>(observed.size()) != model->simulator.output_dimension) {
    std::ostringstream msg;
    msg << "make_objective: observed has length " << observed.size() << ", simulator output has length "
        << model->simulator.output_dimension;
    throw InvalidArgument(msg.str());
  }
  Vector observed_summary = model->summary.apply(observed);
  if (static_cast<std::size_t>(observed_summary.size()) != model->summary.dimension) {
    throw InvalidArgument("make_objective: summary length differs from declared summary dimension");
  }
  return DeterministicObjective(model, std::move(observed_summary), seed, index);
}

Vector finite_difference_gradient(const DistanceFn& objective, const ParameterPoint& theta, double step) {
  if (!(step > 0.0)) {
    throw InvalidArgument("finite_difference_gradient: step must be positive");
  }
  if (!theta.allFinite()) {
    throw InvalidArgument("finite_difference_gradient: theta must be finite");
  }
  Vector grad(theta.size());
  ParameterPoint probe = theta;
  for (Eigen::Index m = 0; m < theta.size(); ++m) {
    const double h = probe_step(step, theta[m]);
    probe[m] = theta[m] + h;
    const double forward = objective(probe);
    if (!std::isfinite(forward)) {
      throw NumericalFailure("non-finite objective at gradient probe", probe);
    }
    probe[m] = theta[m] - h;
    const double backward = objective(probe);
    if (!std::isfinite(backward)) {
      throw NumericalFailure("non-finite objective at gradient probe", probe);
    }
    probe[m] = theta[m];
    grad[m] = (forward - backward) / (2.0 * h);
  }
  return grad;
}

Matrix finite_difference_jacobian(const std::function<Vector(const ParameterPoint&)>& map,
                                  const ParameterPoint& theta, double step) {
  if (!(step > 0.0)) {
    throw InvalidArgument("finite_difference_jacobian: step must be positive");
  }
  ParameterPoint probe = theta;
  Matrix jac;
  for (Eigen::Index m = 0; m < theta.size(); ++m) {
    const double h = probe_step(step, theta[m]);
    probe[m] = theta[m] + h;
    const Vector forward = map(probe);
    if (!forward.allFinite()) {
      throw NumericalFailure("non-finite summary at Jacobian probe", probe);
    }
    probe[m] = theta[m] - h;
    const Vector backward = map(probe);
    if (!backward.allFinite()) {
      throw NumericalFailure("non-finite summary at Jacobian probe", probe);
    }
    probe[m] = theta[m];
    if (m == 0) {
      jac.resize(forward.size(), theta.size());
    }
    jac.col(m) = (forward - backward) / (2.0 * h);
  }
  return jac;
}

}  // namespace romc
