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

#ifndef ROMC_MODEL_HPP
#define ROMC_MODEL_HPP

#include <cstddef>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <romc/types.hpp>

/**
 * \file
 * \brief Probabilistic model interface and the deterministic objectives built from it.
 *
 * A model is a flat bundle of prior, seeded simulator, summary statistics and
 * discrepancy. Fixing the simulator seed gives a deterministic map
 * theta -> y, and with it a deterministic distance d_i(theta) to the observation.
 */

namespace romc {

struct Interval {
  double low;
  double high;

  [[nodiscard]] double width() const noexcept { return high - low; }
};

/// Prior distribution with a bounding box that contains its support.
class Prior {
 public:
  virtual ~Prior() = default;

  [[nodiscard]] virtual std::size_t dimension() const = 0;

  /// Axis-aligned box containing the support; low < high on every axis.
  [[nodiscard]] virtual const std::vector<Interval>& bounds() const = 0;

  /// Log-density; -infinity outside the support.
  [[nodiscard]] virtual double log_density(const ParameterPoint& theta) const = 0;

  [[nodiscard]] virtual ParameterPoint sample(std::mt19937_64& rng) const = 0;

  [[nodiscard]] double density(const ParameterPoint& theta) const;

  [[nodiscard]] bool in_bounds(const ParameterPoint& theta) const;

  /// Clamps every coordinate into the bounding box.
  [[nodiscard]] ParameterPoint clip(ParameterPoint theta) const;
};

/// Product of independent uniforms over a box.
class UniformPrior final : public Prior {
 public:
  explicit UniformPrior(std::vector<Interval> bounds);

  [[nodiscard]] std::size_t dimension() const override { return bounds_.size(); }
  [[nodiscard]] const std::vector<Interval>& bounds() const override { return bounds_; }
  [[nodiscard]] double log_density(const ParameterPoint& theta) const override;
  [[nodiscard]] ParameterPoint sample(std::mt19937_64& rng) const override;

 private:
  std::vector<Interval> bounds_;
  double log_volume_ = 0.0;
};

/// g(theta, seed). Must be reentrant and bit-deterministic for a fixed (theta, seed).
struct SeededSimulator {
  std::size_t output_dimension = 0;
  std::function<Vector(const ParameterPoint&, Seed)> run;
};

/// Phi: simulator output -> summary vector.
struct SummaryFunction {
  std::size_t dimension = 0;
  std::function<Vector(const Vector&)> apply;
};

[[nodiscard]] SummaryFunction identity_summary(std::size_t dimension);

/// Distance between two summary vectors.
using Discrepancy = std::function<double(const Vector&, const Vector&)>;

[[nodiscard]] double squared_euclidean(const Vector& a, const Vector& b);

struct Model {
  std::string name;
  std::shared_ptr<const Prior> prior;
  SeededSimulator simulator;
  SummaryFunction summary;
  /// Observed simulator output y0.
  Vector observed;
  /// Empty means squared Euclidean distance on the summaries.
  std::optional<Discrepancy> distance;

  [[nodiscard]] std::size_t dimension() const { return prior->dimension(); }
  [[nodiscard]] bool uses_squared_euclidean() const { return !distance.has_value(); }
};

/// d_i(theta) = distance(Phi(g(theta, seed_i)), Phi(y0)).
class DeterministicObjective {
 public:
  DeterministicObjective(std::shared_ptr<const Model> model, Vector observed_summary, Seed seed,
                         std::size_t index);

  [[nodiscard]] double operator()(const ParameterPoint& theta) const;

  /// Phi(g(theta, seed)).
  [[nodiscard]] Vector summaries(const ParameterPoint& theta) const;

  [[nodiscard]] Seed seed() const noexcept { return seed_; }
  [[nodiscard]] std::size_t index() const noexcept { return index_; }
  [[nodiscard]] std::size_t dimension() const { return model_->dimension(); }
  [[nodiscard]] const Vector& observed_summary() const noexcept { return observed_summary_; }
  [[nodiscard]] const Model& model() const noexcept { return *model_; }

 private:
  std::shared_ptr<const Model> model_;
  Vector observed_summary_;
  Seed seed_;
  std::size_t index_;
};

/// n1 seeds drawn uniformly from {1, ..., 2^32 - 1}; a pure function of (n1, master_seed).
[[nodiscard]] std::vector<Seed> draw_nuisance_seeds(std::size_t n1, Seed master_seed);

[[nodiscard]] DeterministicObjective make_objective(const std::shared_ptr<const Model>& model,
                                                    const Vector& observed, Seed seed, std::size_t index);

inline constexpr double kDefaultFiniteDifferenceStep = 1e-5;

/// Central differences, step scaled per axis by max(1, |theta_m|). Exactly 2D evaluations.
[[nodiscard]] Vector finite_difference_gradient(const DistanceFn& objective, const ParameterPoint& theta,
                                                double step = kDefaultFiniteDifferenceStep);

/// Central-difference Jacobian of a vector-valued map (rows: outputs, columns: parameters).
[[nodiscard]] Matrix finite_difference_jacobian(const std::function<Vector(const ParameterPoint&)>& map,
                                                const ParameterPoint& theta,
                                                double step = kDefaultFiniteDifferenceStep);

}  // namespace romc

#endif
