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

#include <doctest.h>

#include <cmath>
#include <memory>
#include <random>
#include <vector>

#include <romc/inference.hpp>
#include <romc/regions.hpp>

#include "helpers.hpp"

using namespace romc;
using romc::testing::point;

namespace {

// Two 1D problems with minima at -0.5 and 0.7, boxes slightly wider than the acceptance intervals.
PosteriorApproximation toy_posterior(double eps) {
  auto prior = std::make_shared<UniformPrior>(std::vector<Interval>{{-2.0, 2.0}});
  std::vector<DistanceFn> distances;
  std::vector<ProposalRegion> regions;
  for (const double c : {-0.5, 0.7}) {
    distances.emplace_back([c](const ParameterPoint& t) { return (t[0] - c) * (t[0] - c); });
    const double half = std::sqrt(eps) * 1.2;
    regions.emplace_back(BoundingBox(Matrix::Identity(1, 1), point({c}), point({-half}), point({half})));
  }
  return PosteriorApproximation(prior, {0, 1}, distances, regions, eps);
}

PosteriorApproximation toy_posterior_2d(double eps) {
  auto prior = std::make_shared<UniformPrior>(std::vector<Interval>{{-1.0, 1.0}, {-1.0, 1.0}});
  std::vector<DistanceFn> distances;
  std::vector<ProposalRegion> regions;
  const std::vector<ParameterPoint> centers{point({0.2, 0.1}), point({-0.3, 0.4}), point({0.9, -0.9})};
  for (const auto& c : centers) {
    distances.emplace_back([c](const ParameterPoint& t) { return (t - c).squaredNorm(); });
    const double half = std::sqrt(eps) * 1.1;
    regions.emplace_back(BoundingBox(Matrix::Identity(2, 2), c, Vector::Constant(2, -half),
                                     Vector::Constant(2, half)));
  }
  return PosteriorApproximation(prior, {0, 3, 4}, distances, regions, eps);
}

}  // namespace

TEST_CASE("weights equal indicator times prior over proposal density") {
  const auto posterior = toy_posterior(0.04);
  const InferenceResult result = sample(posterior, 200, 13);
  REQUIRE(result.samples.size() == 400);
  CHECK(result.n1_accepted == 2);
  CHECK(result.n2 == 200);
  std::size_t zero = 0;
  for (const auto& s : result.samples) {
    const double q = posterior.regions()[s.problem_index].density();
    const double d = posterior.distances()[s.problem_index](s.theta);
    const double expected = d <= 0.04 ? posterior.prior().density(s.theta) / q : 0.0;
    CHECK(s.weight == expected);
    zero += s.weight == 0.0 ? 1 : 0;
  }
  CHECK(zero > 0);
  CHECK(zero < 400);
}

TEST_CASE("samples are ordered by region then draw and deterministic") {
  const auto posterior = toy_posterior_2d(0.01);
  const InferenceResult a = sample(posterior, 20, 5, 1);
  const InferenceResult b = sample(posterior, 20, 5, 3);
  REQUIRE(a.samples.size() == b.samples.size());
  for (std::size_t i = 0; i < a.samples.size(); ++i) {
    CHECK(a.samples[i].theta == b.samples[i].theta);
    CHECK(a.samples[i].weight == b.samples[i].weight);
    CHECK(a.samples[i].problem_index == posterior.problem_indices()[i / 20]);
    CHECK(a.samples[i].draw_index == i % 20);
  }
  CHECK_THROWS_AS((void)sample(posterior, 0, 5), InvalidArgument);
}

TEST_CASE("weights of a region outside the prior are zero") {
  const auto posterior = toy_posterior_2d(0.04);
  const InferenceResult r = sample(posterior, 500, 1);
  for (const auto& s : r.samples) {
    if (!posterior.prior().in_bounds(s.theta)) {
      CHECK(s.weight == 0.0);
    }
  }
}

TEST_CASE("weighted expectation of a constant and of theta") {
  const auto posterior = toy_posterior(0.01);
  const InferenceResult r = sample(posterior, 2000, 3);
  const Vector one = compute_expectation(r, [](const ParameterPoint&) { return Vector::Ones(1); });
  CHECK(one[0] == doctest::Approx(1.0));
  const Vector mean = compute_expectation(r, [](const ParameterPoint& t) { return Vector(t); });
  CHECK(mean[0] == doctest::Approx(0.1).epsilon(0.02));

  InferenceResult empty = r;
  for (auto& s : empty.samples) {
    s.weight = 0.0;
  }
  CHECK_THROWS_AS((void)compute_expectation(empty, [](const ParameterPoint& t) { return Vector(t); }),
                  DegenerateResult);
}

TEST_CASE("unnormalized posterior counts accepted distances") {
  const auto posterior = toy_posterior(0.04);
  CHECK(eval_unnorm_posterior(posterior, point({-0.5})) == doctest::Approx(0.25));
  CHECK(eval_unnorm_posterior(posterior, point({0.0})) == 0.0);
  CHECK(eval_unnorm_posterior(posterior, point({3.0})) == 0.0);
  const auto wide = posterior.with_eps(1.0);
  CHECK(eval_unnorm_posterior(wide, point({0.1})) == doctest::Approx(0.5));
}

TEST_CASE("unnormalized posterior is monotone in eps") {
  const auto posterior = toy_posterior_2d(0.01);
  std::mt19937_64 rng(4);
  for (int i = 0; i < 200; ++i) {
    const ParameterPoint t = posterior.prior().sample(rng);
    double previous = 0.0;
    for (const double eps : {0.001, 0.01, 0.05, 0.2, 1.0, 5.0}) {
      const double v = eval_unnorm_posterior(posterior.with_eps(eps), t);
      CHECK(v >= previous);
      previous = v;
    }
  }
}

TEST_CASE("normalized posterior integrates to one on its grid") {
  for (const double eps : {0.01, 0.1, 0.5}) {
    const auto posterior = toy_posterior(eps);
    const PosteriorDensity density(posterior, default_grid_step(posterior.prior()));
    double integral = 0.0;
    for (std::size_t i = 0; i < density.grid().size(); ++i) {
      integral += density(density.grid().midpoint(i)) * density.grid().cell_volume();
    }
    CHECK(std::abs(integral - 1.0) <= 1e-6);
  }
  const auto posterior = toy_posterior_2d(0.02);
  const PosteriorDensity density(posterior, 0.02, 2);
  double integral = 0.0;
  for (std::size_t i = 0; i < density.grid().size(); ++i) {
    integral += density(density.grid().midpoint(i)) * density.grid().cell_volume();
  }
  CHECK(std::abs(integral - 1.0) <= 1e-6);
  CHECK(eval_posterior(posterior, point({0.2, 0.1}), 0.02) == density(point({0.2, 0.1})));
}

TEST_CASE("posterior grid values are identical across worker counts") {
  const auto posterior = toy_posterior_2d(0.05);
  const PosteriorDensity one(posterior, 0.01, 1);
  const PosteriorDensity four(posterior, 0.01, 4);
  CHECK(one.grid_values() == four.grid_values());
  CHECK(one.partition() == four.partition());
}

TEST_CASE("posterior evaluation rejects D > 3 and zero mass") {
  auto prior = std::make_shared<UniformPrior>(std::vector<Interval>(4, Interval{0.0, 1.0}));
  const DistanceFn d = [](const ParameterPoint& t) { return t.squaredNorm(); };
  const PosteriorApproximation p4(prior, {0}, {d},
                                  {ProposalRegion(BoundingBox(Matrix::Identity(4, 4), Vector::Constant(4, 0.5),
                                                              Vector::Constant(4, -0.1),
                                                              Vector::Constant(4, 0.1)))},
                                  0.1);
  CHECK_THROWS_AS((void)eval_posterior(p4, Vector::Constant(4, 0.5), 0.1), UnsupportedDimension);
  const auto tiny = toy_posterior(0.04).with_eps(1e-12);
  CHECK_THROWS_AS((void)eval_posterior(tiny, point({0.0}), 0.3), DegenerateResult);
}

TEST_CASE("posterior approximation validates its inputs") {
  auto prior = std::make_shared<UniformPrior>(std::vector<Interval>{{0.0, 1.0}});
  CHECK_THROWS_AS(PosteriorApproximation(prior, {}, {}, {}, 0.1), InvalidArgument);
  const auto ok = toy_posterior(0.1);
  CHECK_THROWS_AS((void)ok.with_eps(0.0), InvalidArgument);
}

TEST_CASE("summaries and marginals of weighted samples") {
  InferenceResult r;
  for (int i = 0; i < 4; ++i) {
    r.samples.push_back({point({static_cast<double>(i)}), i == 3 ? 0.0 : 1.0, 0, static_cast<std::size_t>(i)});
  }
  const SampleSummary s = summarize(r);
  CHECK(s.n_samples == 4);
  CHECK(s.n_nonzero == 3);
  REQUIRE(s.parameters.size() == 1);
  CHECK(s.parameters[0].mean == doctest::Approx(1.0));
  CHECK(s.parameters[0].sd == doctest::Approx(std::sqrt(2.0 / 3.0)));
  const auto m = weighted_marginal(r, 0, -0.5, 3.5, 4);
  REQUIRE(m.size() == 4);
  CHECK(m == std::vector<double>{1.0, 1.0, 1.0, 0.0});
  CHECK_THROWS_AS((void)weighted_marginal(r, 0, 1.0, 1.0, 4), InvalidArgument);
}

TEST_CASE("midpoint grid geometry") {
  const MidpointGrid g({{0.0, 1.0}, {-1.0, 1.0}}, 0.25);
  CHECK(g.cells() == std::vector<std::size_t>{4, 8});
  CHECK(g.size() == 32);
  CHECK(g.cell_volume() == doctest::Approx(0.0625));
  CHECK(g.midpoint(0) == point({0.125, -0.875}));
  CHECK(g.midpoint(1) == point({0.125, -0.625}));
  CHECK(g.midpoint(31) == point({0.875, 0.875}));
}
