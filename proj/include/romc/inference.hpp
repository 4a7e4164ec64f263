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

#ifndef ROMC_INFERENCE_HPP
#define ROMC_INFERENCE_HPP

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include <romc/grid.hpp>
#include <romc/model.hpp>
#include <romc/regions.hpp>
#include <romc/types.hpp>

/**
 * \file
 * \brief Weighted sampling from the proposal regions, expectations and posterior evaluation.
 *
 * A draw theta_ij from region i gets the weight
 *   w_ij = 1{d_i(theta_ij) <= eps} * p(theta_ij) / q_i(theta_ij),
 * with q_i the uniform density of the i-th box. The unnormalized posterior at
 * theta is p(theta) times the number of accepted distances with d_i(theta) <= eps.
 */

namespace romc {

struct WeightedSample {
  ParameterPoint theta;
  double weight;
  std::size_t problem_index;
  std::size_t draw_index;
};

/// Accepted problems: their distances (true or surrogate) aligned with their proposal regions.
class PosteriorApproximation {
 public:
  PosteriorApproximation(std::shared_ptr<const Prior> prior, std::vector<std::size_t> problem_indices,
                         std::vector<DistanceFn> distances, std::vector<ProposalRegion> regions, double eps);

  [[nodiscard]] const Prior& prior() const noexcept { return *prior_; }
  [[nodiscard]] const std::shared_ptr<const Prior>& prior_ptr() const noexcept { return prior_; }
  [[nodiscard]] std::size_t size() const noexcept { return indices_.size(); }
  [[nodiscard]] std::size_t dimension() const { return prior_->dimension(); }
  [[nodiscard]] double eps() const noexcept { return eps_; }
  [[nodiscard]] const std::vector<std::size_t>& problem_indices() const noexcept { return indices_; }
  [[nodiscard]] const std::vector<DistanceFn>& distances() const noexcept { return distances_; }
  [[nodiscard]] const std::vector<ProposalRegion>& regions() const noexcept { return regions_; }

  /// Same objectives and regions with another threshold.
  [[nodiscard]] PosteriorApproximation with_eps(double eps) const;

 private:
  std::shared_ptr<const Prior> prior_;
  std::vector<std::size_t> indices_;
  std::vector<DistanceFn> distances_;
  std::vector<ProposalRegion> regions_;
  double eps_;
};

struct InferenceResult {
  std::vector<WeightedSample> samples;
  std::size_t n1_accepted = 0;
  std::size_t n2 = 0;
  Seed seed = 0;

  [[nodiscard]] std::vector<double> weights() const;
};

/// n2 draws per region; region i uses the child seed mix_seed(seed, problem_index).
[[nodiscard]] InferenceResult sample(const PosteriorApproximation& posterior, std::size_t n2, Seed seed,
                                     std::size_t workers = 1);

/// sum_ij w_ij h(theta_ij) / sum_ij w_ij. Throws DegenerateResult if all weights are zero.
[[nodiscard]] Vector compute_expectation(const InferenceResult& result,
                                         const std::function<Vector(const ParameterPoint&)>& h);

/// p(theta) * #{i : d_i(theta) <= eps}.
[[nodiscard]] double eval_unnorm_posterior(const Prior& prior, std::span<const DistanceFn> distances, double eps,
                                           const ParameterPoint& theta);
[[nodiscard]] double eval_unnorm_posterior(const PosteriorApproximation& posterior, const ParameterPoint& theta);

inline constexpr std::size_t kMaxGridDimension = 3;

/// Default Riemann spacing: 1/200 of the mean prior range.
[[nodiscard]] double default_grid_step(const Prior& prior);

/// Normalized posterior; the partition function is computed once at
/// construction by the midpoint rule over the prior bounding box.
class PosteriorDensity {
 public:
  PosteriorDensity(const PosteriorApproximation& posterior, double grid_step, std::size_t workers = 1);

  [[nodiscard]] double operator()(const ParameterPoint& theta) const;
  [[nodiscard]] double partition() const noexcept { return partition_; }
  [[nodiscard]] const MidpointGrid& grid() const noexcept { return grid_; }
  /// Unnormalized values at the grid midpoints (flat index order).
  [[nodiscard]] const std::vector<double>& grid_values() const noexcept { return grid_values_; }

 private:
  PosteriorApproximation posterior_;
  MidpointGrid grid_;
  std::vector<double> grid_values_;
  double partition_ = 0.0;
};

/// One-shot normalized evaluation; prefer PosteriorDensity for repeated calls.
[[nodiscard]] double eval_posterior(const PosteriorApproximation& posterior, const ParameterPoint& theta,
                                    double grid_step);

struct ParameterSummary {
  double mean;
  double sd;
  double q025;
  double q975;
};

struct SampleSummary {
  std::size_t n_samples = 0;
  std::size_t n_nonzero = 0;
  std::vector<ParameterSummary> parameters;
};

/// Weighted mean, standard deviation and 2.5% / 97.5% quantiles per parameter.
[[nodiscard]] SampleSummary summarize(const InferenceResult& result);

/// Weighted histogram of one coordinate with equal-width bins over [low, high].
[[nodiscard]] std::vector<double> weighted_marginal(const InferenceResult& result, std::size_t axis, double low,
                                                    double high, std::size_t bins);

}  // namespace romc

#endif
