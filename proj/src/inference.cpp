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

#include <romc/inference.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>

#include <romc/parallel.hpp>

namespace romc {

PosteriorApproximation::PosteriorApproximation(std::shared_ptr<const Prior> prior,
                                               std::vector<std::size_t> problem_indices,
                                               std::vector<DistanceFn> distances, std::vector<ProposalRegion> regions,
                                               double eps)
    : prior_(std::move(prior)),
      indices_(std::move(problem_indices)),
      distances_(std::move(distances)),
      regions_(std::move(regions)),
      eps_(eps) {
  if (!prior_) {
    throw InvalidArgument("PosteriorApproximation: missing prior");
  }
  if (indices_.empty() || indices_.size() != distances_.size() || indices_.size() != regions_.size()) {
    throw InvalidArgument("PosteriorApproximation: needs k >= 1 aligned objectives and regions");
  }
  if (!(eps_ > 0.0)) {
    throw InvalidArgument("PosteriorApproximation: eps must be positive");
  }
}

PosteriorApproximation PosteriorApproximation::with_eps(double eps) const {
  return PosteriorApproximation(prior_, indices_, distances_, regions_, eps);
}

std::vector<double> InferenceResult::weights() const {
  std::vector<double> w;
  w.reserve(samples.size());
  for (const auto& s : samples) {
    w.push_back(s.weight);
  }
  return w;
}

InferenceResult sample(const PosteriorApproximation& posterior, std::size_t n2, Seed seed, std::size_t workers) {
  if (n2 == 0) {
    throw InvalidArgument("sample: n2 must be positive");
  }
  const Prior& prior = posterior.prior();
  const double eps = posterior.eps();
  auto outcomes = run_tasks(posterior.size(), workers, [&](std::size_t r) {
    const ProposalRegion& region = posterior.regions()[r];
    const DistanceFn& distance = posterior.distances()[r];
    const std::size_t problem = posterior.problem_indices()[r];
    const double q = region.density();
    std::vector<WeightedSample> draws;
    draws.reserve(n2);
    std::size_t j = 0;
    for (auto& theta : region.sample(n2, mix_seed(seed, problem))) {
      double w = 0.0;
      if (distance(theta) <= eps) {
        w = prior.density(theta) / q;
      }
      draws.push_back({std::move(theta), w, problem, j++});
    }
    return draws;
  });

  InferenceResult result;
  result.n1_accepted = posterior.size();
  result.n2 = n2;
  result.seed = seed;
  result.samples.reserve(posterior.size() * n2);
  for (auto& outcome : outcomes) {
    if (!outcome.ok()) {
      throw Error("sample: region task failed: " + outcome.error);
    }
    for (auto& s : *outcome.value) {
      result.samples.push_back(std::move(s));
    }
  }
  return result;
}

Vector compute_expectation(const InferenceResult& result, const std::function<Vector(const ParameterPoint&)>& h) {
  double total = 0.0;
  Vector acc;
  for (const auto& s : result.samples) {
    if (s.weight <= 0.0) {
      continue;
    }
    const Vector v = h(s.theta);
    if (acc.size() == 0) {
      acc = Vector::Zero(v.size());
    }
    acc += s.weight * v;
    total += s.weight;
  }
  if (!(total > 0.0)) {
    throw DegenerateResult("compute_expectation: all weights are zero");
  }
  return acc / total;
}

double eval_unnorm_posterior(const Prior& prior, std::span<const DistanceFn> distances, double eps,
                             const ParameterPoint& theta) {
  const double p = prior.density(theta);
  if (p == 0.0) {
    return 0.0;
  }
  std::size_t count = 0;
  for (const auto& d : distances) {
    if (d(theta) <= eps) {
      ++count;
    }
  }
  return p * static_cast<double>(count);
}

double eval_unnorm_posterior(const PosteriorApproximation& posterior, const ParameterPoint& theta) {
  return eval_unnorm_posterior(posterior.prior(), posterior.distances(), posterior.eps(), theta);
}

double default_grid_step(const Prior& prior) {
  const auto& b = prior.bounds();
  double total = 0.0;
  for (const auto& i : b) {
    total += i.width();
  }
  return total / static_cast<double>(b.size()) / 200.0;
}

PosteriorDensity::PosteriorDensity(const PosteriorApproximation& posterior, double grid_step, std::size_t workers)
    : posterior_(posterior), grid_(posterior.prior().bounds(), grid_step) {
  if (posterior.dimension() > kMaxGridDimension) {
    throw UnsupportedDimension("eval_posterior: Riemann integration is limited to D <= 3");
  }
  constexpr std::size_t kChunk = 256;
  const std::size_t chunks = (grid_.size() + kChunk - 1) / kChunk;
  auto outcomes = run_tasks(chunks, workers, [&](std::size_t c) {
    std::vector<double> values;
    const std::size_t end = std::min(grid_.size(), (c + 1) * kChunk);
    for (std::size_t i = c * kChunk; i < end; ++i) {
      values.push_back(eval_unnorm_posterior(posterior, grid_.midpoint(i)));
    }
    return values;
  });
  grid_values_.reserve(grid_.size());
  for (auto& o : outcomes) {
    if (!o.ok()) {
      throw Error("eval_posterior: grid evaluation failed: " + o.error);
    }
    grid_values_.insert(grid_values_.end(), o.value->begin(), o.value->end());
  }
  partition_ = std::accumulate(grid_values_.begin(), grid_values_.end(), 0.0) * grid_.cell_volume();
  if (!(partition_ > 0.0)) {
    throw DegenerateResult("eval_posterior: partition function is zero");
  }
}

double PosteriorDensity::operator()(const ParameterPoint& theta) const {
  return eval_unnorm_posterior(posterior_, theta) / partition_;
}

double eval_posterior(const PosteriorApproximation& posterior, const ParameterPoint& theta, double grid_step) {
  return PosteriorDensity(posterior, grid_step)(theta);
}

namespace {

double weighted_quantile(std::vector<std::pair<double, double>>& value_weight, double total, double q) {
  double cumulative = 0.0;
  for (const auto& [v, w] : value_weight) {
    cumulative += w;
    if (cumulative >= q * total) {
      return v;
    }
  }
  return value_weight.back().first;
}

}  // namespace

SampleSummary summarize(const InferenceResult& result) {
  SampleSummary summary;
  summary.n_samples = result.samples.size();
  double total = 0.0;
  for (const auto& s : result.samples) {
    if (s.weight > 0.0) {
      ++summary.n_nonzero;
      total += s.weight;
    }
  }
  if (!(total > 0.0)) {
    throw DegenerateResult("summarize: all weights are zero");
  }
  const auto dim = result.samples.front().theta.size();
  for (Eigen::Index m = 0; m < dim; ++m) {
    std::vector<std::pair<double, double>> vw;
    double mean = 0.0;
    for (const auto& s : result.samples) {
      if (s.weight > 0.0) {
        vw.emplace_back(s.theta[m], s.weight);
        mean += s.weight * s.theta[m];
      }
    }
    mean /= total;
    double var = 0.0;
    for (const auto& [v, w] : vw) {
      var += w * (v - mean) * (v - mean);
    }
    var /= total;
    std::sort(vw.begin(), vw.end());
    summary.parameters.push_back(
        {mean, std::sqrt(var), weighted_quantile(vw, total, 0.025), weighted_quantile(vw, total, 0.975)});
  }
  return summary;
}

std::vector<double> weighted_marginal(const InferenceResult& result, std::size_t axis, double low, double high,
                                      std::size_t bins) {
  if (bins == 0 || !(high > low)) {
    throw InvalidArgument("weighted_marginal: need bins >= 1 and low < high");
  }
  std::vector<double> hist(bins, 0.0);
  const double width = (high - low) / static_cast<double>(bins);
  for (const auto& s : result.samples) {
    const double v = s.theta[static_cast<Eigen::Index>(axis)];
    if (s.weight <= 0.0 || v < low || v > high) {
      continue;
    }
    const auto b = std::min(static_cast<std::size_t>((v - low) / width), bins - 1);
    hist[b] += s.weight;
  }
  return hist;
}

}  // namespace romc
