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

#ifndef ROMC_BENCHMARKS_HPP
#define ROMC_BENCHMARKS_HPP

#include <memory>
#include <span>
#include <string>
#include <vector>

#include <romc/grid.hpp>
#include <romc/inference.hpp>
#include <romc/model.hpp>

/**
 * \file
 * \brief Reference models (1D running example, MA(2) time series) and a rejection ABC baseline.
 */

namespace romc::benchmarks {

/// theta^4 on [-0.5, 0.5], |theta| - (0.5 - 0.5^4) outside; continuous and even.
[[nodiscard]] double location_1d(double theta);

/// First standard-normal draw of a generator seeded with `seed`.
[[nodiscard]] double standard_normal_draw(Seed seed);

/// Prior U(-2.5, 2.5), y = location_1d(theta) + u with u ~ N(0, 1) drawn from
/// the seed, observation y0 = 0, identity summary.
[[nodiscard]] std::shared_ptr<const Model> model_1d();

/// Exact posterior of the 1D model, proportional to p(theta) N(0; location_1d(theta), 1),
/// normalized by the midpoint rule on [-2.5, 2.5].
class TruePosterior1d {
 public:
  explicit TruePosterior1d(double grid_step);

  [[nodiscard]] double operator()(const ParameterPoint& theta) const;
  [[nodiscard]] double normalizer() const noexcept { return normalizer_; }
  [[nodiscard]] const MidpointGrid& grid() const noexcept { return grid_; }

 private:
  MidpointGrid grid_;
  double normalizer_ = 1.0;
};

/// p(theta1) p(theta2 | theta1) = U(theta1; -2, 2) U(theta2; theta1 - 1, theta1 + 1).
class Ma2Prior final : public Prior {
 public:
  Ma2Prior();

  [[nodiscard]] std::size_t dimension() const override { return 2; }
  [[nodiscard]] const std::vector<Interval>& bounds() const override { return bounds_; }
  [[nodiscard]] double log_density(const ParameterPoint& theta) const override;
  [[nodiscard]] ParameterPoint sample(std::mt19937_64& rng) const override;

 private:
  std::vector<Interval> bounds_;
};

/// y_t = w_t + theta1 w_{t-1} + theta2 w_{t-2}; noise holds w_{-1}, w_0, w_1, ..., w_T.
[[nodiscard]] Vector ma2_series(const ParameterPoint& theta, std::span<const double> noise);

/// T + 2 standard normals drawn from the seed.
[[nodiscard]] std::vector<double> ma2_noise(std::size_t length, Seed seed);

/// Lag-1 and lag-2 autocovariances: (sum_{t>=2} y_t y_{t-1} / (T-1), sum_{t>=3} y_t y_{t-2} / (T-2)).
[[nodiscard]] Vector ma2_summaries(const Vector& series);

inline constexpr std::size_t kMa2DefaultLength = 100;
inline constexpr Seed kMa2DefaultObservationSeed = 676;

/// MA(2) model with the observation simulated once from theta_true and obs_seed.
[[nodiscard]] std::shared_ptr<const Model> model_ma2(std::size_t length = kMa2DefaultLength,
                                                     ParameterPoint theta_true = ParameterPoint{{0.6, 0.2}},
                                                     Seed obs_seed = kMa2DefaultObservationSeed);

struct RejectionResult {
  InferenceResult samples;  // unit weights
  std::vector<double> distances;
  double threshold = 0.0;
};

/// Draws theta from the prior, simulates with a fresh seed per draw and keeps
/// the ceil(accept_quantile * n_draws) draws with the smallest distance.
[[nodiscard]] RejectionResult rejection_abc(const Model& model, std::size_t n_draws, double accept_quantile,
                                            Seed seed, std::size_t workers = 1);

/// Builds a bundled model by name ("1d" or "ma2").
[[nodiscard]] std::shared_ptr<const Model> model_by_name(const std::string& name);

}  // namespace romc::benchmarks

#endif
