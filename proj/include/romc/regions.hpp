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

#ifndef ROMC_REGIONS_HPP
#define ROMC_REGIONS_HPP

#include <cstddef>
#include <vector>

#include <romc/model.hpp>
#include <romc/optimize.hpp>
#include <romc/types.hpp>

/**
 * \file
 * \brief Bounding-box approximation of acceptance regions and the uniform proposals over them.
 *
 * The box axes are the eigenvectors of a curvature matrix at the optimum. Along
 * each axis a line search walks outwards with long steps until the distance
 * exceeds the threshold, steps back, halves the step and repeats.
 */

namespace romc {

/// Rotated hyperrectangle {center + R z : lower_m <= z_m <= upper_m}.
class BoundingBox {
 public:
  /// Throws InvalidArgument if the rotation is not orthonormal or any lower >= 0 or upper <= 0.
  BoundingBox(Matrix rotation, ParameterPoint center, Vector lower, Vector upper);

  [[nodiscard]] std::size_t dimension() const noexcept { return static_cast<std::size_t>(center_.size()); }
  [[nodiscard]] const Matrix& rotation() const noexcept { return rotation_; }
  [[nodiscard]] const ParameterPoint& center() const noexcept { return center_; }
  /// Negative extents (all < 0) in rotated coordinates.
  [[nodiscard]] const Vector& lower() const noexcept { return lower_; }
  /// Positive extents (all > 0) in rotated coordinates.
  [[nodiscard]] const Vector& upper() const noexcept { return upper_; }
  [[nodiscard]] double volume() const noexcept { return volume_; }

  [[nodiscard]] Vector to_local(const ParameterPoint& theta) const;
  [[nodiscard]] ParameterPoint to_global(const Vector& local) const;
  [[nodiscard]] bool contains(const ParameterPoint& theta, double tolerance = 1e-12) const;

  /// Corners in rotation order: 2 endpoints for D = 1; for D = 2 a closed
  /// polyline of 5 points (first corner repeated).
  [[nodiscard]] std::vector<ParameterPoint> corner_polyline() const;

 private:
  Matrix rotation_;
  ParameterPoint center_;
  Vector lower_;
  Vector upper_;
  double volume_;
};

/// Uniform distribution over a bounding box.
class ProposalRegion {
 public:
  explicit ProposalRegion(BoundingBox box) : box_(std::move(box)) {}

  [[nodiscard]] const BoundingBox& box() const noexcept { return box_; }
  [[nodiscard]] double density() const noexcept { return 1.0 / box_.volume(); }
  /// density() inside the box, 0 outside.
  [[nodiscard]] double pdf(const ParameterPoint& theta) const;

  [[nodiscard]] std::vector<ParameterPoint> sample(std::size_t n, Seed seed) const;

 private:
  BoundingBox box_;
};

struct LineSearchSettings {
  double eta_start = 0.25;
  int refinements = 10;  // K
  int max_steps = 40;    // M

  [[nodiscard]] double resolution() const { return eta_start / static_cast<double>(1 << refinements); }
};

/// Defaults scaled to the prior: eta_start = 0.05 * mean prior range, K = 10, M = 40.
[[nodiscard]] LineSearchSettings default_line_search(const Prior& prior);

/// Unit eigenvectors of the symmetrized matrix, columns ordered by descending
/// eigenvalue, first nonzero component of each column positive. Falls back to
/// the identity (with a warning) if the decomposition fails.
[[nodiscard]] Matrix curvature_axes(const Matrix& hess);

/// J^T J where J is the finite-difference Jacobian of the summaries at theta_star.
[[nodiscard]] Matrix jacobian_curvature(const DeterministicObjective& objective, const ParameterPoint& theta_star,
                                        double step = kDefaultFiniteDifferenceStep);

/// Distance travelled from theta_star along `direction` before the distance exceeds eps.
[[nodiscard]] double line_search_extent(const DistanceFn& distance, const ParameterPoint& theta_star,
                                        const Vector& direction, double eps, const LineSearchSettings& settings);

/// True when all eigenvalues of the symmetrized matrix are >= -tolerance * max(1, |largest|).
[[nodiscard]] bool is_positive_semidefinite(const Matrix& m, double tolerance = 1e-10);

/// Line search along +v_m and -v_m for every axis of `curvature`.
[[nodiscard]] BoundingBox build_box(const DistanceFn& distance, const OptimisationResult& result, double eps,
                                    const LineSearchSettings& settings, const Matrix& curvature);

struct RegionPlotData {
  std::vector<ParameterPoint> corners;
  /// Grid axes over the margin-padded box (one vector per dimension).
  std::vector<Vector> axes;
  /// grid values; for D = 2 indexed [i * grid + j] with i along axes[0].
  std::vector<double> distances;
};

/// Box outline and a grid of distance values over the box padded by 20% per side. D <= 2 only.
[[nodiscard]] RegionPlotData region_plot_data(const ProposalRegion& region, const DistanceFn& distance,
                                              std::size_t grid);

}  // namespace romc

#endif
