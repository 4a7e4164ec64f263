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
#include <random>
#include <vector>

#include <romc/benchmarks.hpp>
#include <romc/evaluate.hpp>

#include "helpers.hpp"

using namespace romc;
using romc::testing::point;

TEST_CASE("1d location function is continuous and symmetric") {
  CHECK(benchmarks::location_1d(0.0) == 0.0);
  CHECK(benchmarks::location_1d(0.25) == doctest::Approx(std::pow(0.25, 4)));
  const double at_knot = std::pow(0.5, 4);
  CHECK(benchmarks::location_1d(0.5) == doctest::Approx(at_knot));
  CHECK(benchmarks::location_1d(0.5 + 1e-12) == doctest::Approx(at_knot));
  CHECK(benchmarks::location_1d(2.0) == doctest::Approx(2.0 - 0.5 + at_knot));
  CHECK(benchmarks::location_1d(-1.3) == benchmarks::location_1d(1.3));
}

TEST_CASE("1d model: prior, observation and dimension") {
  const auto model = benchmarks::model_1d();
  CHECK(model->name == "1d");
  CHECK(model->dimension() == 1);
  REQUIRE(model->prior->bounds().size() == 1);
  CHECK(model->prior->bounds()[0].low == -2.5);
  CHECK(model->prior->bounds()[0].high == 2.5);
  CHECK(model->observed.size() == 1);
  CHECK(model->observed[0] == 0.0);
  CHECK(model->uses_squared_euclidean());
}

TEST_CASE("1d true posterior is normalized and symmetric") {
  const benchmarks::TruePosterior1d truth(0.001);
  double integral = 0.0;
  for (std::size_t i = 0; i < truth.grid().size(); ++i) {
    integral += truth(truth.grid().midpoint(i)) * truth.grid().cell_volume();
  }
  CHECK(integral == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(truth(point({0.3})) == doctest::Approx(truth(point({-0.3}))));
  CHECK(truth(point({0.0})) > truth(point({1.0})));
  CHECK(truth(point({3.0})) == 0.0);
}

TEST_CASE("standard normal draws have unit moments") {
  double sum = 0.0;
  double sum_sq = 0.0;
  constexpr int n = 20000;
  for (int i = 0; i < n; ++i) {
    const double u = benchmarks::standard_normal_draw(static_cast<Seed>(i + 1));
    sum += u;
    sum_sq += u * u;
  }
  CHECK(sum / n == doctest::Approx(0.0).epsilon(0.03));
  CHECK(std::abs(sum / n) < 0.03);
  CHECK(sum_sq / n == doctest::Approx(1.0).epsilon(0.03));
}

TEST_CASE("MA2 prior support") {
  const benchmarks::Ma2Prior prior;
  CHECK(prior.density(point({0.6, 0.2})) == doctest::Approx(0.125));
  CHECK(prior.density(point({0.0, 1.5})) == 0.0);
  CHECK(prior.density(point({2.5, 0.0})) == 0.0);
  std::mt19937_64 rng(3);
  for (int i = 0; i < 2000; ++i) {
    CHECK(prior.density(prior.sample(rng)) > 0.0);
  }
}

TEST_CASE("MA2 series and summaries") {
  const std::vector<double> w{1.0, 2.0, 3.0, 4.0};
  const Vector y = benchmarks::ma2_series(point({0.5, 0.25}), w);
  REQUIRE(y.size() == 2);
  CHECK(y[0] == doctest::Approx(3.0 + 0.5 * 2.0 + 0.25 * 1.0));
  CHECK(y[1] == doctest::Approx(4.0 + 0.5 * 3.0 + 0.25 * 2.0));
  CHECK(benchmarks::ma2_noise(100, 5).size() == 102);
  CHECK(benchmarks::ma2_noise(100, 5) == benchmarks::ma2_noise(100, 5));
  const Vector s = benchmarks::ma2_summaries(Vector{{1.0, 2.0, 3.0}});
  CHECK(s[0] == doctest::Approx((2.0 + 6.0) / 2.0));
  CHECK(s[1] == doctest::Approx(3.0));
  CHECK_THROWS_AS((void)benchmarks::ma2_summaries(Vector{{1.0, 2.0}}), InvalidArgument);
}

TEST_CASE("MA2 model observes theta = (0.6, 0.2)") {
  const auto model = benchmarks::model_ma2();
  CHECK(model->name == "ma2");
  CHECK(model->observed.size() == static_cast<Eigen::Index>(benchmarks::kMa2DefaultLength));
  const Vector expected =
      benchmarks::ma2_series(point({0.6, 0.2}),
                             benchmarks::ma2_noise(benchmarks::kMa2DefaultLength,
                                                   benchmarks::kMa2DefaultObservationSeed));
  CHECK(model->observed == expected);
  CHECK(benchmarks::model_by_name("ma2")->name == "ma2");
  CHECK(benchmarks::model_by_name("1d")->name == "1d");
  CHECK_THROWS_AS((void)benchmarks::model_by_name("nope"), InvalidArgument);
}

TEST_CASE("rejection ABC keeps the closest quantile of draws") {
  const auto model = benchmarks::model_1d();
  const auto r = benchmarks::rejection_abc(*model, 2000, 0.05, 9);
  CHECK(r.samples.samples.size() == 100);
  CHECK(r.distances.size() == 100);
  for (std::size_t i = 1; i < r.distances.size(); ++i) {
    CHECK(r.distances[i - 1] <= r.distances[i]);
  }
  CHECK(r.threshold == r.distances.back());
  for (const auto& s : r.samples.samples) {
    CHECK(s.weight == 1.0);
  }
  const auto again = benchmarks::rejection_abc(*model, 2000, 0.05, 9, 3);
  CHECK(again.distances == r.distances);
  CHECK(compute_ess(r.samples.weights()) == doctest::Approx(100.0));
}
