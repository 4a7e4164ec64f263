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

#ifndef ROMC_TESTS_HELPERS_HPP
#define ROMC_TESTS_HELPERS_HPP

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include <romc/model.hpp>

namespace romc::testing {

/// Uniform prior over `bounds`, simulator theta -> map(theta) ignoring the seed,
/// identity summary and the given observation.
inline std::shared_ptr<const Model> deterministic_model(std::vector<Interval> bounds,
                                                        std::function<Vector(const ParameterPoint&)> map,
                                                        std::size_t output_dimension, Vector observed) {
  auto model = std::make_shared<Model>();
  model->name = "toy";
  model->prior = std::make_shared<UniformPrior>(std::move(bounds));
  model->simulator.output_dimension = output_dimension;
  model->simulator.run = [map = std::move(map)](const ParameterPoint& theta, Seed) { return map(theta); };
  model->summary = identity_summary(output_dimension);
  model->observed = std::move(observed);
  return model;
}

/// Wraps a distance and counts its evaluations.
struct CountingDistance {
  std::function<double(const ParameterPoint&)> f;
  std::shared_ptr<std::size_t> calls = std::make_shared<std::size_t>(0);

  double operator()(const ParameterPoint& theta) const {
    ++*calls;
    return f(theta);
  }
};

inline ParameterPoint point(std::initializer_list<double> values) {
  ParameterPoint p(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (const double v : values) {
    p[i++] = v;
  }
  return p;
}

}  // namespace romc::testing

#endif
