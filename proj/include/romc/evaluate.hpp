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

#ifndef ROMC_EVALUATE_HPP
#define ROMC_EVALUATE_HPP

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include <romc/grid.hpp>
#include <romc/inference.hpp>
#include <romc/model.hpp>
#include <romc/types.hpp>

namespace romc {

/// (sum w)^2 / sum w^2. Throws DegenerateResult when no weight is positive.
[[nodiscard]] double compute_ess(std::span<const double> weights);

enum class DivergenceKind { kJensenShannon, kKullbackLeibler };

[[nodiscard]] DivergenceKind parse_divergence_kind(std::string_view name);

/// KL(p || q) and JS(p, q) in nats between two nonnegative vectors, each
/// renormalized to sum 1. KL is +infinity (with a warning) where q = 0 < p.
[[nodiscard]] double discrete_divergence(std::span<const double> p, std::span<const double> q, DivergenceKind kind);

/// Both densities are evaluated on the midpoint grid over `bounds`, turned into
/// cell masses and renormalized before the divergence is taken. D <= 3.
[[nodiscard]] double compute_divergence(const DistanceFn& posterior, const DistanceFn& reference,
                                        const std::vector<Interval>& bounds, double step, DivergenceKind kind);

/// Kernel-free reference density from a weighted sample: the weight mass of
/// each grid cell divided by the total mass and the cell volume.
class SampleHistogramDensity {
 public:
  SampleHistogramDensity(const InferenceResult& samples, std::vector<Interval> bounds, double step);

  [[nodiscard]] double operator()(const ParameterPoint& theta) const;
  [[nodiscard]] const MidpointGrid& grid() const noexcept { return grid_; }

 private:
  [[nodiscard]] std::optional<std::size_t> cell_of(const ParameterPoint& theta) const;

  MidpointGrid grid_;
  std::vector<double> density_;
};

}  // namespace romc

#endif
