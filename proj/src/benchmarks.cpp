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

#include <romc/benchmarks.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include <romc/parallel.hpp>

namespace romc::benchmarks {

namespace {
constexpr double kHalfWidth1d = 2.5;
constexpr double kKink = 0.5;
const double kShift = kKink - std::pow(kKink, 4);
}  // namespace

double location_1d(double theta) {
  const double a = std::abs(theta);
  return a <= kKink ? theta * theta * theta * theta : a - kShift;
}

double standard_normal_draw(Seed seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  return normal(rng);
}

std::shared_ptr<const Model> model_1d() {
  auto model = std::make_shared<Model>();
  model->name = "1d";
  model->prior = std::make_shared<UniformPrior>(std::vector<Interval>{{-kHalfWidth1d, kHalfWidth1d}});
  model->simulator.output_dimension = 1;
  model->simulator.run = [](const ParameterPoint& theta, Seed seed) {
    return Vector::Constant(1, location_1d(theta[0]) + standard_normal_draw(seed));
  };
  model->summary = identity_summary(1);
  model->observed = Vector::Zero(1);
  return model;
}

TruePosterior1d::TruePosterior1d(double grid_step) : grid_({{-kHalfWidth1d, kHalfWidth1d}}, grid_step) {
  double mass = 0.0;
  for (std::size_t i = 0; i < grid_.size(); ++i) {
    mass += (*this)(grid_.midpoint(i));
  }
  normalizer_ = mass * grid_.cell_volume();
}

double TruePosterior1d::operator()(const ParameterPoint& theta) const {
  const double t = theta[0];
  if (t < -kHalfWidth1d || t > kHalfWidth1d) {
    return 0.0;
  }
  const double loc = location_1d(t);
  const double prior = 1.0 / (2.0 * kHalfWidth1d);
  const double likelihood = std::exp(-0.5 * loc * loc) / std::sqrt(2.0 * M_PI);
  return prior * likelihood / normalizer_;
}

Ma2Prior::Ma2Prior() : bounds_{{-2.0, 2.0}, {-3.0, 3.0}} {}

double Ma2Prior::log_density(const ParameterPoint& theta) const {
  if (theta.size() != 2) {
    return -std::numeric_limits<double>::infinity();
  }
  const double t1 = theta[0];
  const double t2 = theta[1];
  if (t1 < -2.0 || t1 > 2.0 || t2 < t1 - 1.0 || t2 > t1 + 1.0) {
    return -std::numeric_limits<double>::infinity();
  }
  return -std::log(8.0);
}

ParameterPoint Ma2Prior::sample(std::mt19937_64& rng) const {
  std::uniform_real_distribution<double> first(-2.0, 2.0);
  const double t1 = first(rng);
  std::uniform_real_distribution<double> second(t1 - 1.0, t1 + 1.0);
  return ParameterPoint{{t1, second(rng)}};
}

Vector ma2_series(const ParameterPoint& theta, std::span<const double> noise) {
  if (noise.size() < 3) {
    throw InvalidArgument("ma2_series: need at least 3 noise terms");
  }
  const std::size_t length = noise.size() - 2;
  Vector y(static_cast<Eigen::Index>(length));
  for (std::size_t t = 0; t < length; ++t) {
    y[static_cast<Eigen::Index>(t)] = noise[t + 2] + theta[0] * noise[t + 1] + theta[1] * noise[t];
  }
  return y;
}

std::vector<double> ma2_noise(std::size_t length, Seed seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> w(length + 2);
  for (auto& v : w) {
    v = normal(rng);
  }
  return w;
}

Vector ma2_summaries(const Vector& y) {
  const Eigen::Index length = y.size();
  if (length < 3) {
    throw InvalidArgument("ma2_summaries: series must have at least 3 points");
  }
  const double lag1 = y.tail(length - 1).dot(y.head(length - 1)) / static_cast<double>(length - 1);
  const double lag2 = y.tail(length - 2).dot(y.head(length - 2)) / static_cast<double>(length - 2);
  return Vector{{lag1, lag2}};
}

std::shared_ptr<const Model> model_ma2(std::size_t length, ParameterPoint theta_true, Seed obs_seed) {
  if (length < 3) {
    throw InvalidArgument("model_ma2: T must be at least 3");
  }
  auto model = std::make_shared<Model>();
  model->name = "ma2";
  model->prior = std::make_shared<Ma2Prior>();
  model->simulator.output_dimension = length;
  model->simulator.run = [length](const ParameterPoint& theta, Seed seed) {
    return ma2_series(theta, ma2_noise(length, seed));
  };
  model->summary = SummaryFunction{2, [](const Vector& y) { return ma2_summaries(y); }};
  model->observed = model->simulator.run(theta_true, obs_seed);
  return model;
}

RejectionResult rejection_abc(const Model& model, std::size_t n_draws, double accept_quantile, Seed seed,
                              std::size_t workers) {
  if (n_draws == 0) {
    throw InvalidArgument("rejection_abc: n_draws must be positive");
  }
  if (!(accept_quantile > 0.0 && accept_quantile <= 1.0)) {
    throw InvalidArgument("rejection_abc: accept_quantile must lie in (0, 1]");
  }
  const Vector observed_summary = model.summary.apply(model.observed);
  struct Draw {
    ParameterPoint theta;
    double distance;
  };
  auto outcomes = run_tasks(n_draws, workers, [&](std::size_t i) {
    std::mt19937_64 rng(mix_seed(seed, 2 * i));
    ParameterPoint theta = model.prior->sample(rng);
    const Vector s = model.summary.apply(model.simulator.run(theta, mix_seed(seed, 2 * i + 1)));
    const double d = model.distance ? (*model.distance)(s, observed_summary) : squared_euclidean(s, observed_summary);
    return Draw{std::move(theta), d};
  });
  std::vector<Draw> draws;
  draws.reserve(n_draws);
  for (auto& o : outcomes) {
    if (!o.ok()) {
      throw Error("rejection_abc: simulation failed: " + o.error);
    }
    draws.push_back(std::move(*o.value));
  }
  std::vector<std::size_t> order(n_draws);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return draws[a].distance < draws[b].distance; });
  const auto keep = std::clamp<std::size_t>(
      static_cast<std::size_t>(std::ceil(accept_quantile * static_cast<double>(n_draws) - 1e-9)), 1, n_draws);

  RejectionResult result;
  result.samples.n1_accepted = keep;
  result.samples.n2 = 1;
  result.samples.seed = seed;
  for (std::size_t r = 0; r < keep; ++r) {
    const std::size_t i = order[r];
    result.samples.samples.push_back({draws[i].theta, 1.0, i, 0});
    result.distances.push_back(draws[i].distance);
  }
  result.threshold = result.distances.back();
  return result;
}

std::shared_ptr<const Model> model_by_name(const std::string& name) {
  if (name == "1d") {
    return model_1d();
  }
  if (name == "ma2") {
    return model_ma2();
  }
  throw InvalidArgument("unknown model '" + name + "' (expected 1d or ma2)");
}

}  // namespace romc::benchmarks
