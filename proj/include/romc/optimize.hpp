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

#ifndef ROMC_OPTIMIZE_HPP
#define ROMC_OPTIMIZE_HPP

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <romc/gaussian_process.hpp>
#include <romc/model.hpp>
#include <romc/types.hpp>

/**
 * \file
 * \brief Per-problem minimization of d_i, solution filtering and threshold selection.
 */

namespace romc {

/// Minimum of one deterministic problem. The Hessian approximation is symmetrized on construction.
struct OptimisationResult {
  OptimisationResult(ParameterPoint x_min, double f_min, const Matrix& hess_appr);

  ParameterPoint x_min;
  double f_min;
  Matrix hess_appr;
};

/// Outcome of one solve; `result` is empty when the problem could not be solved.
struct SolveReport {
  std::optional<OptimisationResult> result;
  int iterations = 0;
  int evaluations = 0;
  std::string failure;
};

struct GradientSolverOptions {
  int restarts = 1;
  int max_iters = 200;
  double gradient_tolerance = 1e-10;
  double function_tolerance = 1e-14;
  double fd_step = kDefaultFiniteDifferenceStep;
  /// Closed-form gradient; finite differences are used when empty.
  std::function<Vector(const ParameterPoint&)> gradient;
};

/// BFGS with a backtracking Armijo line search, started from `restarts` prior
/// draws. Iterates stay inside the prior bounding box.
[[nodiscard]] SolveReport solve_gradient(const DistanceFn& objective, const Prior& prior,
                                         const GradientSolverOptions& options, Seed seed);

struct BayesianSolverOptions {
  int budget = 40;
  int init_points = 10;
  int candidates = 512;
};

struct BayesianSolveReport {
  SolveReport report;
  std::optional<GaussianProcess> surrogate;
};

/// GP-based Bayesian optimization with expected improvement. `x_min` is the
/// best evaluated point and `f_min` the GP mean there; `hess_appr` is the
/// finite-difference Hessian of the GP mean.
[[nodiscard]] BayesianSolveReport solve_bayesian(const DistanceFn& objective, const Prior& prior,
                                                 const BayesianSolverOptions& options, Seed seed);

/// Expected improvement below `best` for a Gaussian prediction.
[[nodiscard]] double expected_improvement(double mean, double variance, double best);

[[nodiscard]] Matrix finite_difference_hessian(const DistanceFn& f, const ParameterPoint& x, const Vector& steps);

using IndexedResult = std::pair<std::size_t, std::optional<OptimisationResult>>;

/// Indices of successful results with f_min <= eps, in ascending order.
[[nodiscard]] std::vector<std::size_t> filter_solutions(std::span<const IndexedResult> results, double eps);

/// Element at zero-based index min(floor(quantile * n), n - 1) of the sorted distances.
[[nodiscard]] double compute_eps(std::span<const double> f_mins, double quantile);

struct HistogramBin {
  double left;
  double right;
  std::size_t count;
};

/// Equal-width bins over [min, max]; the last bin is right-closed.
[[nodiscard]] std::vector<HistogramBin> distance_histogram(std::span<const double> values, std::size_t bins);

}  // namespace romc

#endif
