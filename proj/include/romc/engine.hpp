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

#ifndef ROMC_ENGINE_HPP
#define ROMC_ENGINE_HPP

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <romc/evaluate.hpp>
#include <romc/gaussian_process.hpp>
#include <romc/inference.hpp>
#include <romc/model.hpp>
#include <romc/optimize.hpp>
#include <romc/regions.hpp>
#include <romc/surrogate.hpp>

/**
 * \file
 * \brief End-to-end ROMC driver: training (solve, filter, regions, surrogates) and inference.
 *
 * Every random choice is derived from the master seed before any work is
 * dispatched, so results do not depend on the number of workers.
 */

namespace romc {

/// Result of solving one problem. `surrogate` is set by optimizers that build a
/// model of the distance (Bayesian optimization).
struct SolveOutcome {
  SolveReport report;
  std::optional<GaussianProcess> surrogate;
};

class Optimizer {
 public:
  virtual ~Optimizer() = default;
  [[nodiscard]] virtual std::string name() const = 0;
  [[nodiscard]] virtual SolveOutcome solve(const DeterministicObjective& objective, const Prior& prior,
                                           Seed seed) const = 0;
};

class GradientOptimizer final : public Optimizer {
 public:
  explicit GradientOptimizer(GradientSolverOptions options = {}) : options_(std::move(options)) {}
  [[nodiscard]] std::string name() const override { return "gradient"; }
  [[nodiscard]] SolveOutcome solve(const DeterministicObjective& objective, const Prior& prior,
                                   Seed seed) const override;
  [[nodiscard]] const GradientSolverOptions& options() const noexcept { return options_; }

 private:
  GradientSolverOptions options_;
};

class BayesianOptimizer final : public Optimizer {
 public:
  explicit BayesianOptimizer(BayesianSolverOptions options = {}) : options_(options) {}
  [[nodiscard]] std::string name() const override { return "bo"; }
  [[nodiscard]] SolveOutcome solve(const DeterministicObjective& objective, const Prior& prior,
                                   Seed seed) const override;
  [[nodiscard]] const BayesianSolverOptions& options() const noexcept { return options_; }

 private:
  BayesianSolverOptions options_;
};

class RegionBuilder {
 public:
  virtual ~RegionBuilder() = default;
  /// `distance` is the function the region must enclose (real or BO surrogate).
  [[nodiscard]] virtual ProposalRegion build(const DistanceFn& distance, const DeterministicObjective& objective,
                                             const OptimisationResult& result, double eps,
                                             const Prior& prior) const = 0;
};

/// Bounding boxes along curvature axes. Curvature: the optimizer's Hessian if
/// positive semidefinite, else J^T J (squared Euclidean models), else identity.
class BoxRegionBuilder final : public RegionBuilder {
 public:
  explicit BoxRegionBuilder(std::optional<LineSearchSettings> settings = std::nullopt) : settings_(settings) {}
  [[nodiscard]] ProposalRegion build(const DistanceFn& distance, const DeterministicObjective& objective,
                                     const OptimisationResult& result, double eps,
                                     const Prior& prior) const override;

 private:
  std::optional<LineSearchSettings> settings_;
};

/// Curvature used by BoxRegionBuilder.
[[nodiscard]] Matrix select_curvature(const DeterministicObjective& objective, const OptimisationResult& result);

class SurrogateFitter {
 public:
  virtual ~SurrogateFitter() = default;
  [[nodiscard]] virtual std::shared_ptr<const LocalSurrogate> fit(const DistanceFn& distance,
                                                                  const ProposalRegion& region, Seed seed,
                                                                  std::size_t region_index) const = 0;
};

class QuadraticFitter final : public SurrogateFitter {
 public:
  /// 0 means default_training_size(D).
  explicit QuadraticFitter(std::size_t n_train = 0) : n_train_(n_train) {}
  [[nodiscard]] std::shared_ptr<const LocalSurrogate> fit(const DistanceFn& distance, const ProposalRegion& region,
                                                          Seed seed, std::size_t region_index) const override;

 private:
  std::size_t n_train_;
};

struct ProblemRecord {
  std::size_t index = 0;
  Seed seed = 0;
  SolveReport report;
  std::optional<GaussianProcess> surrogate;
  double wall_seconds = 0.0;

  [[nodiscard]] bool solved() const noexcept { return report.result.has_value(); }
};

struct RegionRecord {
  std::size_t index = 0;
  ProposalRegion region;
  std::shared_ptr<const LocalSurrogate> local;
};

/// Child seeds of the master seed for the optimizer and the surrogate fits.
[[nodiscard]] Seed solver_seed(Seed master, std::size_t index);
[[nodiscard]] Seed surrogate_seed(Seed master, std::size_t index);

class Romc {
 public:
  explicit Romc(std::shared_ptr<const Model> model);

  void set_optimizer(std::shared_ptr<const Optimizer> optimizer);
  void set_region_builder(std::shared_ptr<const RegionBuilder> builder);
  void set_surrogate_fitter(std::shared_ptr<const SurrogateFitter> fitter);

  [[nodiscard]] const Model& model() const noexcept { return *model_; }
  [[nodiscard]] const std::shared_ptr<const Model>& model_ptr() const noexcept { return model_; }

  /// Draws n1 nuisance seeds and solves every problem with the configured optimizer.
  void solve_all(std::size_t n1, Seed seed, std::size_t workers = 1);
  /// Installs the default gradient or BO optimizer, then solve_all.
  void solve_problems(std::size_t n1, Seed seed, bool use_bo, std::size_t workers = 1);

  /// Replaces the training state by previously computed solutions.
  void restore_problems(Seed master_seed, std::vector<ProblemRecord> problems);

  [[nodiscard]] const std::vector<ProblemRecord>& problems() const noexcept { return problems_; }
  [[nodiscard]] Seed master_seed() const noexcept { return master_seed_; }
  [[nodiscard]] std::size_t solved_count() const;
  /// f_min of every solved problem in index order.
  [[nodiscard]] std::vector<double> solved_distances() const;
  [[nodiscard]] std::vector<HistogramBin> distance_hist(std::size_t bins) const;
  [[nodiscard]] double compute_eps(double quantile) const;

  [[nodiscard]] const DeterministicObjective& objective(std::size_t index) const;

  /// Filters with eps, builds a region per accepted problem and optionally fits
  /// local surrogates. `use_surrogate` selects the BO surrogate (when present)
  /// instead of the real distance.
  void estimate_regions(double eps, bool use_surrogate = true, bool fit_models = false, std::size_t workers = 1);

  /// Replaces the regions by stored ones (surrogates optional per record).
  void restore_regions(double eps, bool use_surrogate, std::vector<RegionRecord> regions);

  [[nodiscard]] bool has_regions() const noexcept { return posterior_.has_value(); }
  [[nodiscard]] double eps() const;
  [[nodiscard]] bool use_surrogate() const noexcept { return registry_.use_bo_surrogate(); }
  [[nodiscard]] const std::vector<RegionRecord>& regions() const noexcept { return regions_; }
  [[nodiscard]] std::vector<std::size_t> failed_regions() const { return failed_regions_; }
  [[nodiscard]] const SurrogateRegistry& registry() const noexcept { return registry_; }
  [[nodiscard]] const PosteriorApproximation& posterior() const;

  [[nodiscard]] InferenceResult sample(std::size_t n2, Seed seed, std::size_t workers = 1) const;
  [[nodiscard]] static Vector compute_expectation(const InferenceResult& result,
                                                  const std::function<Vector(const ParameterPoint&)>& h);
  [[nodiscard]] double eval_unnorm_posterior(const ParameterPoint& theta) const;
  [[nodiscard]] PosteriorDensity posterior_density(double grid_step = 0.0, std::size_t workers = 1) const;
  [[nodiscard]] double eval_posterior(const ParameterPoint& theta, double grid_step = 0.0) const;
  [[nodiscard]] static double compute_ess(const InferenceResult& result);
  /// Divergence between the normalized ROMC posterior and a reference density on the prior grid.
  [[nodiscard]] double compute_divergence(const DistanceFn& reference, double grid_step = 0.0,
                                          DivergenceKind kind = DivergenceKind::kJensenShannon,
                                          std::size_t workers = 1) const;

 private:
  void rebuild_objectives(std::size_t n1);
  void rebuild_registry();
  void rebuild_posterior(double eps);

  std::shared_ptr<const Model> model_;
  Vector observed_summary_;
  std::shared_ptr<const Optimizer> optimizer_;
  std::shared_ptr<const RegionBuilder> region_builder_;
  std::shared_ptr<const SurrogateFitter> surrogate_fitter_;

  Seed master_seed_ = 0;
  std::vector<DeterministicObjective> objectives_;
  std::vector<ProblemRecord> problems_;
  SurrogateRegistry registry_;
  std::vector<RegionRecord> regions_;
  std::vector<std::size_t> failed_regions_;
  std::optional<PosteriorApproximation> posterior_;
};

}  // namespace romc

#endif
