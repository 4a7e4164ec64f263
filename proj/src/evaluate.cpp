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

#include <romc/evaluate.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include <romc/grid.hpp>
#include <romc/inference.hpp>

namespace romc {

double compute_ess(std::span<const double> weights) {
  double sum = 0.0;
  double sum_sq = 0.0;
  for (const double w : weights) {
    if (w < 0.0 || !std::isfinite(w)) {
      throw InvalidArgument("compute_ess: weights must be finite and nonnegative");
    }
    sum += w;
    sum_sq += w * w;
  }
  if (!(sum > 0.0)) {
    throw DegenerateResult("compute_ess: all weights are zero");
  }
  return sum * sum / sum_sq;
}

DivergenceKind parse_divergence_kind(std::string_view name) {
  if (name == "js" || name == "jensen-shannon" || name == "Jensen-Shannon") {
    return DivergenceKind::kJensenShannon;
  }
  if (name == "kl" || name == "KL-divergence" || name == "kl-divergence") {
    return DivergenceKind::kKullbackLeibler;
  }
  throw InvalidArgument("unknown divergence '" + std::string(name) + "' (expected js or kl)");
}

namespace {

std::vector<double> normalized(std::span<const double> v) {
  const double total = std::accumulate(v.begin(), v.end(), 0.0);
  if (!(total > 0.0)) {
    throw DegenerateResult("divergence: density has zero mass on the grid");
  }
  std::vector<double> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] < 0.0 || !std::isfinite(v[i])) {
      throw InvalidArgument("divergence: densities must be finite and nonnegative");
    }
    out[i] = v[i] / total;
  }
  return out;
}

double kl_term(double a, double b) { return a > 0.0 ? a * std::log(a / b) : 0.0; }

}  // namespace

double discrete_divergence(std::span<const double> p_raw, std::span<const double> q_raw, DivergenceKind kind) {
  if (p_raw.size() != q_raw.size() || p_raw.empty()) {
    throw InvalidArgument("divergence: distributions must be non-empty and of equal length");
  }
  const auto p = normalized(p_raw);
  const auto q = normalized(q_raw);
  double total = 0.0;
  if (kind == DivergenceKind::kKullbackLeibler) {
    for (std::size_t i = 0; i < p.size(); ++i) {
      if (p[i] > 0.0 && q[i] == 0.0) {
        warn("KL divergence is infinite: reference is zero where the posterior is positive");
        return std::numeric_limits<double>::infinity();
      }
      total += kl_term(p[i], q[i]);
    }
    return total;
  }
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double m = 0.5 * (p[i] + q[i]);
    total += 0.5 * (kl_term(p[i], m) + kl_term(q[i], m));
  }
  return total;
}

double compute_divergence(const DistanceFn& posterior, const DistanceFn& reference,
                          const std::vector<Interval>& bounds, double step, DivergenceKind kind) {
  if (bounds.size() > kMaxGridDimension) {
    throw UnsupportedDimension("compute_divergence: Riemann approximation is limited to D <= 3");
  }
  const MidpointGrid grid(bounds, step);
  std::vector<double> p(grid.size());
  std::vector<double> q(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const ParameterPoint theta = grid.midpoint(i);
    p[i] = posterior(theta) * grid.cell_volume();
    q[i] = reference(theta) * grid.cell_volume();
  }
  return discrete_divergence(p, q, kind);
}

SampleHistogramDensity::SampleHistogramDensity(const InferenceResult& samples, std::vector<Interval> bounds,
                                               double step)
    : grid_(std::move(bounds), step), density_(grid_.size(), 0.0) {
  if (grid_.dimension() > kMaxGridDimension) {
    throw UnsupportedDimension("SampleHistogramDensity: limited to D <= 3");
  }
  double total = 0.0;
  for (const auto& s : samples.samples) {
    if (s.weight <= 0.0) {
      continue;
    }
    if (const auto cell = cell_of(s.theta)) {
      density_[*cell] += s.weight;
      total += s.weight;
    }
  }
  if (!(total > 0.0)) {
    throw DegenerateResult("SampleHistogramDensity: no positive weight inside the grid");
  }
  for (auto& d : density_) {
    d /= total * grid_.cell_volume();
  }
}

std::optional<std::size_t> SampleHistogramDensity::cell_of(const ParameterPoint& theta) const {
  std::size_t flat = 0;
  for (std::size_t m = 0; m < grid_.dimension(); ++m) {
    const auto& b = grid_.bounds()[m];
    const double v = theta[static_cast<Eigen::Index>(m)];
    if (v < b.low || v > b.high) {
      return std::nullopt;
    }
    const std::size_t n = grid_.cells()[m];
    const auto c = std::min(static_cast<std::size_t>((v - b.low) / grid_.spacing()[static_cast<Eigen::Index>(m)]), n - 1);
    flat = flat * n + c;
  }
  return flat;
}

double SampleHistogramDensity::operator()(const ParameterPoint& theta) const {
  const auto cell = cell_of(theta);
  return cell ? density_[*cell] : 0.0;
}

}  // namespace romc
