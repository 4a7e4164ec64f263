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

#include <romc/engine.hpp>

#include <chrono>
#include <string>

#include <romc/parallel.hpp>

namespace romc {

namespace {
constexpr std::uint64_t kSolverStream = 0x51;
constexpr std::uint64_t kSurrogateStream = 0x52;
}  // namespace

Seed solver_seed(Seed master, std::size_t index) { return mix_seed(mix_seed(master, kSolverStream), index); }

Seed surrogate_seed(Seed master, std::size_t index) { return mix_seed(mix_seed(master, kSurrogateStream), index); }

SolveOutcome GradientOptimizer::solve(const DeterministicObjective& objective, const Prior& prior, Seed seed) const {
  return {solve_gradient([&objective](const ParameterPoint& t) { return objective(t); }, prior, options_, seed),
          std::nullopt};
}

SolveOutcome BayesianOptimizer::solve(const DeterministicObjective& objective, const Prior& prior, Seed seed) const {
  auto out = solve_bayesian([&objective](const ParameterPoint& t) { return objective(t); }, prior, options_, seed);
  return {std::move(out.report), std::move(out.surrogate)};
}

Matrix select_curvature(const DeterministicObjective& objective, const OptimisationResult& result) {
  if (result.hess_appr.allFinite() && is_positive_semidefinite(result.hess_appr)) {
    return result.hess_appr;
  }
  if (objective.model().uses_squared_euclidean()) {
    try {
      Matrix jtj = jacobian_curvature(objective, result.x_min);
      if (jtj.allFinite()) {
        return jtj;
      }
    } catch (const NumericalFailure&) {
    }
  }
  warn("problem " + std::to_string(objective.index()) + ": no usable curvature, using identity axes");
  const auto dim = static_cast<Eigen::Index>(objective.dimension());
  return Matrix::Identity(dim, dim);
}

ProposalRegion BoxRegionBuilder::build(const DistanceFn& distance, const DeterministicObjective& objective,
                                       const OptimisationResult& result, double eps, const Prior& prior) const {
  const LineSearchSettings settings = settings_ ? *settings_ : default_line_search(prior);
  return ProposalRegion(build_box(distance, result, eps, settings, select_curvature(objective, result)));
}

std::shared_ptr<const LocalSurrogate> QuadraticFitter::fit(const DistanceFn& distance, const ProposalRegion& region,
                                                           Seed seed, std::size_t region_index) const {
  const std::size_t n = n_train_ > 0 ? n_train_ : default_training_size(region.box().dimension());
  return fit_quadratic(distance, region, n, seed, region_index);
}

Romc::Romc(std::shared_ptr<const Model> model)
    : model_(std::move(model)),
      optimizer_(std::make_shared<GradientOptimizer>()),
      region_builder_(std::make_shared<BoxRegionBuilder>()),
      surrogate_fitter_(std::make_shared<QuadraticFitter>()) {
  if (!model_ || !model_->prior) {
    throw InvalidArgument("Romc: model and prior are required");
  }
  observed_summary_ = model_->summary.apply(model_->observed);
}

void Romc::set_optimizer(std::shared_ptr<const Optimizer> optimizer) {
  if (!optimizer) {
    throw InvalidArgument("Romc: optimizer must not be null");
  }
  optimizer_ = std::move(optimizer);
}

void Romc::set_region_builder(std::shared_ptr<const RegionBuilder> builder) {
  if (!builder) {
    throw InvalidArgument("Romc: region builder must not be null");
  }
  region_builder_ = std::move(builder);
}

void Romc::set_surrogate_fitter(std::shared_ptr<const SurrogateFitter> fitter) {
  if (!fitter) {
    throw InvalidArgument("Romc: surrogate fitter must not be null");
  }
  surrogate_fitter_ = std::move(fitter);
}

void Romc::rebuild_objectives(std::size_t n1) {
  const auto seeds = draw_nuisance_seeds(n1, master_seed_);
  objectives_.clear();
  objectives_.reserve(n1);
  for (std::size_t i = 0; i < n1; ++i) {
    objectives_.push_back(make_objective(model_, model_->observed, seeds[i], i));
  }
}

void Romc::rebuild_registry() {
  registry_ = SurrogateRegistry{};
  for (const auto& obj : objectives_) {
    registry_.set_objective(obj.index(), [obj](const ParameterPoint& t) { return obj(t); });
  }
  for (const auto& p : problems_) {
    if (p.surrogate) {
      auto gp = std::make_shared<const GaussianProcess>(*p.surrogate);
      registry_.set_bo_surrogate(p.index, [gp](const ParameterPoint& t) { return gp->predict_mean(t); });
    }
  }
  regions_.clear();
  failed_regions_.clear();
  posterior_.reset();
}

void Romc::solve_all(std::size_t n1, Seed seed, std::size_t workers) {
  master_seed_ = seed;
  rebuild_objectives(n1);
  const Prior& prior = *model_->prior;
  auto outcomes = run_tasks(n1, workers, [&](std::size_t i) {
    const auto start = std::chrono::steady_clock::now();
    SolveOutcome out = optimizer_->solve(objectives_[i], prior, solver_seed(seed, i));
    const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
    return ProblemRecord{i, objectives_[i].seed(), std::move(out.report), std::move(out.surrogate), elapsed.count()};
  });
  problems_.clear();
  problems_.reserve(n1);
  for (std::size_t i = 0; i < n1; ++i) {
    if (outcomes[i].ok()) {
      problems_.push_back(std::move(*outcomes[i].value));
    } else {
      ProblemRecord failed;
      failed.index = i;
      failed.seed = objectives_[i].seed();
      failed.report.failure = outcomes[i].error;
      problems_.push_back(std::move(failed));
    }
  }
  rebuild_registry();
}

void Romc::solve_problems(std::size_t n1, Seed seed, bool use_bo, std::size_t workers) {
  if (use_bo) {
    set_optimizer(std::make_shared<BayesianOptimizer>());
  } else {
    set_optimizer(std::make_shared<GradientOptimizer>());
  }
  solve_all(n1, seed, workers);
}

void Romc::restore_problems(Seed master_seed, std::vector<ProblemRecord> problems) {
  master_seed_ = master_seed;
  rebuild_objectives(problems.size());
  for (std::size_t i = 0; i < problems.size(); ++i) {
    if (problems[i].index != i || problems[i].seed != objectives_[i].seed()) {
      throw InvalidArgument("restore_problems: records do not match the seeds drawn from the master seed");
    }
  }
  problems_ = std::move(problems);
  rebuild_registry();
}

std::size_t Romc::solved_count() const {
  std::size_t n = 0;
  for (const auto& p : problems_) {
    n += p.solved() ? 1 : 0;
  }
  return n;
}

std::vector<double> Romc::solved_distances() const {
  std::vector<double> out;
  for (const auto& p : problems_) {
    if (p.solved()) {
      out.push_back(p.report.result->f_min);
    }
  }
  return out;
}

std::vector<HistogramBin> Romc::distance_hist(std::size_t bins) const {
  const auto d = solved_distances();
  if (d.empty()) {
    throw InvalidState("distance_hist: no solved problems");
  }
  return distance_histogram(d, bins);
}

double Romc::compute_eps(double quantile) const {
  const auto d = solved_distances();
  return romc::compute_eps(d, quantile);
}

const DeterministicObjective& Romc::objective(std::size_t index) const {
  if (index >= objectives_.size()) {
    throw InvalidArgument("objective: unknown problem index " + std::to_string(index));
  }
  return objectives_[index];
}

void Romc::estimate_regions(double eps, bool use_surrogate, bool fit_models, std::size_t workers) {
  if (problems_.empty()) {
    throw InvalidState("estimate_regions: solve_problems must run first");
  }
  registry_.set_use_bo_surrogate(use_surrogate);
  registry_.clear_local_surrogates();
  std::vector<IndexedResult> results;
  results.reserve(problems_.size());
  for (const auto& p : problems_) {
    results.emplace_back(p.index, p.report.result);
  }
  const auto accepted = filter_solutions(results, eps);
  const Prior& prior = *model_->prior;

  struct Built {
    ProposalRegion region;
    std::shared_ptr<const LocalSurrogate> local;
  };
  auto outcomes = run_tasks(accepted.size(), workers, [&](std::size_t k) {
    const std::size_t i = accepted[k];
    const DistanceFn distance = registry_.region_distance(i);
    ProposalRegion region = region_builder_->build(distance, objectives_[i], *problems_[i].report.result, eps, prior);
    std::shared_ptr<const LocalSurrogate> local;
    if (fit_models) {
      local = surrogate_fitter_->fit(distance, region, surrogate_seed(master_seed_, i), i);
    }
    return Built{std::move(region), std::move(local)};
  });

  std::vector<RegionRecord> regions;
  failed_regions_.clear();
  for (std::size_t k = 0; k < accepted.size(); ++k) {
    if (outcomes[k].ok()) {
      regions.push_back({accepted[k], std::move(outcomes[k].value->region), std::move(outcomes[k].value->local)});
    } else {
      warn("problem " + std::to_string(accepted[k]) + ": region construction failed: " + outcomes[k].error);
      failed_regions_.push_back(accepted[k]);
    }
  }
  regions_ = std::move(regions);
  rebuild_posterior(eps);
}

void Romc::restore_regions(double eps, bool use_surrogate, std::vector<RegionRecord> regions) {
  registry_.set_use_bo_surrogate(use_surrogate);
  registry_.clear_local_surrogates();
  for (const auto& r : regions) {
    if (r.index >= problems_.size() || !problems_[r.index].solved()) {
      throw InvalidArgument("restore_regions: region refers to an unsolved or unknown problem");
    }
  }
  regions_ = std::move(regions);
  failed_regions_.clear();
  rebuild_posterior(eps);
}

void Romc::rebuild_posterior(double eps) {
  posterior_.reset();
  if (regions_.empty()) {
    throw DegenerateResult("estimate_regions: no problem has f_min <= eps");
  }
  std::vector<std::size_t> indices;
  std::vector<DistanceFn> distances;
  std::vector<ProposalRegion> boxes;
  for (const auto& r : regions_) {
    if (r.local) {
      registry_.set_local_surrogate(r.index, r.local);
    }
    indices.push_back(r.index);
    boxes.push_back(r.region);
  }
  for (const auto i : indices) {
    distances.push_back(registry_.distance(i));
  }
  posterior_.emplace(model_->prior, std::move(indices), std::move(distances), std::move(boxes), eps);
}

double Romc::eps() const { return posterior().eps(); }

const PosteriorApproximation& Romc::posterior() const {
  if (!posterior_) {
    throw InvalidState("estimate_regions must run before inference");
  }
  return *posterior_;
}

InferenceResult Romc::sample(std::size_t n2, Seed seed, std::size_t workers) const {
  return romc::sample(posterior(), n2, seed, workers);
}

Vector Romc::compute_expectation(const InferenceResult& result, const std::function<Vector(const ParameterPoint&)>& h) {
  return romc::compute_expectation(result, h);
}

double Romc::eval_unnorm_posterior(const ParameterPoint& theta) const {
  return romc::eval_unnorm_posterior(posterior(), theta);
}

PosteriorDensity Romc::posterior_density(double grid_step, std::size_t workers) const {
  const double step = grid_step > 0.0 ? grid_step : default_grid_step(*model_->prior);
  return PosteriorDensity(posterior(), step, workers);
}

double Romc::eval_posterior(const ParameterPoint& theta, double grid_step) const {
  return posterior_density(grid_step)(theta);
}

double Romc::compute_ess(const InferenceResult& result) {
  const auto w = result.weights();
  return romc::compute_ess(w);
}

double Romc::compute_divergence(const DistanceFn& reference, double grid_step, DivergenceKind kind,
                                std::size_t workers) const {
  const PosteriorDensity density = posterior_density(grid_step, workers);
  const MidpointGrid& grid = density.grid();
  std::vector<double> p(density.grid_values());
  std::vector<double> q(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    q[i] = reference(grid.midpoint(i));
  }
  return discrete_divergence(p, q, kind);
}

}  // namespace romc
