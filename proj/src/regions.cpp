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

#include <romc/regions.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace romc {

BoundingBox::BoundingBox(Matrix rotation, ParameterPoint center, Vector lower, Vector upper)
    : rotation_(std::move(rotation)), center_(std::move(center)), lower_(std::move(lower)), upper_(std::move(upper)) {
  const Eigen::Index dim = center_.size();
  if (dim == 0 || rotation_.rows() != dim || rotation_.cols() != dim || lower_.size() != dim ||
      upper_.size() != dim) {
    throw InvalidArgument("BoundingBox: inconsistent dimensions");
  }
  const double defect = (rotation_.transpose() * rotation_ - Matrix::Identity(dim, dim)).lpNorm<Eigen::Infinity>();
  if (!(defect < 1e-8)) {
    throw InvalidArgument("BoundingBox: rotation is not orthonormal");
  }
  if (!((lower_.array() < 0.0).all() && (upper_.array() > 0.0).all())) {
    throw InvalidArgument("BoundingBox: limits must satisfy lower < 0 < upper");
  }
  volume_ = (upper_ - lower_).prod();
}

Vector BoundingBox::to_local(const ParameterPoint& theta) const { return rotation_.transpose() * (theta - center_); }

ParameterPoint BoundingBox::to_global(const Vector& local) const { return center_ + rotation_ * local; }

bool BoundingBox::contains(const ParameterPoint& theta, double tolerance) const {
  const Vector z = to_local(theta);
  return (z.array() >= lower_.array() - tolerance).all() && (z.array() <= upper_.array() + tolerance).all();
}

std::vector<ParameterPoint> BoundingBox::corner_polyline() const {
  std::vector<ParameterPoint> out;
  if (dimension() == 1) {
    out.push_back(to_global(lower_));
    out.push_back(to_global(upper_));
    return out;
  }
  if (dimension() != 2) {
    throw UnsupportedDimension("corner_polyline: only defined for D <= 2");
  }
  const Vector z0{{lower_[0], lower_[1]}};
  const Vector z1{{upper_[0], lower_[1]}};
  const Vector z2{{upper_[0], upper_[1]}};
  const Vector z3{{lower_[0], upper_[1]}};
  for (const Vector* z : {&z0, &z1, &z2, &z3, &z0}) {
    out.push_back(to_global(*z));
  }
  return out;
}

double ProposalRegion::pdf(const ParameterPoint& theta) const {
  return box_.contains(theta, 0.0) ? density() : 0.0;
}

std::vector<ParameterPoint> ProposalRegion::sample(std::size_t n, Seed seed) const {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const auto dim = static_cast<Eigen::Index>(box_.dimension());
  std::vector<ParameterPoint> out;
  out.reserve(n);
  Vector z(dim);
  for (std::size_t i = 0; i < n; ++i) {
    for (Eigen::Index m = 0; m < dim; ++m) {
      z[m] = box_.lower()[m] + unit(rng) * (box_.upper()[m] - box_.lower()[m]);
    }
    out.push_back(box_.to_global(z));
  }
  return out;
}

LineSearchSettings default_line_search(const Prior& prior) {
  const auto& b = prior.bounds();
  const double mean_range =
      std::accumulate(b.begin(), b.end(), 0.0, [](double acc, const Interval& i) { return acc + i.width(); }) /
      static_cast<double>(b.size());
  LineSearchSettings settings;
  settings.eta_start = 0.05 * mean_range;
  return settings;
}

Matrix curvature_axes(const Matrix& hess) {
  const Eigen::Index dim = hess.rows();
  const Matrix sym = 0.5 * (hess + hess.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(sym);
  if (solver.info() != Eigen::Success || !solver.eigenvectors().allFinite()) {
    warn("curvature_axes: eigendecomposition failed, using identity axes");
    return Matrix::Identity(dim, dim);
  }
  // Eigen sorts ascending; a stable sort keeps ties in Eigen's column order.
  std::vector<Eigen::Index> order(static_cast<std::size_t>(dim));
  std::iota(order.begin(), order.end(), 0);
  const Vector& values = solver.eigenvalues();
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) { return values[a] > values[b]; });

  Matrix axes(dim, dim);
  for (Eigen::Index c = 0; c < dim; ++c) {
    Vector v = solver.eigenvectors().col(order[static_cast<std::size_t>(c)]).normalized();
    for (Eigen::Index r = 0; r < dim; ++r) {
      if (std::abs(v[r]) > 1e-14) {
        if (v[r] < 0.0) {
          v = -v;
        }
        break;
      }
    }
    axes.col(c) = v;
  }
  return axes;
}

Matrix jacobian_curvature(const DeterministicObjective& objective, const ParameterPoint& theta_star, double step) {
  const Matrix jac = finite_difference_jacobian(
      [&objective](const ParameterPoint& theta) { return objective.summaries(theta); }, theta_star, step);
  return jac.transpose() * jac;
}

double line_search_extent(const DistanceFn& distance, const ParameterPoint& theta_star, const Vector& direction,
                          double eps, const LineSearchSettings& settings) {
  if (!(settings.eta_start > 0.0) || settings.refinements < 1 || settings.max_steps < 1) {
    throw InvalidArgument("line_search_extent: invalid settings");
  }
  auto outside = [&](double t) {
    const double d = distance(theta_star + t * direction);
    if (std::isnan(d)) {
      throw NumericalFailure("non-finite distance during line search", theta_star + t * direction);
    }
    return d > eps;
  };

  // A coarse walk at eta_start, then K refinements at eta_start / 2^k.
  double t = 0.0;
  double eta = settings.eta_start;
  for (int k = 0; k <= settings.refinements; ++k) {
    int j = 0;
    do {
      t += eta;
      ++j;
    } while (!outside(t) && j < settings.max_steps);
    t -= eta;
    eta /= 2.0;
  }
  if (t == 0.0) {
    t = settings.resolution();
  }
  return t;
}

bool is_positive_semidefinite(const Matrix& m, double tolerance) {
  if (!m.allFinite()) {
    return false;
  }
  Eigen::SelfAdjointEigenSolver<Matrix> solver(0.5 * (m + m.transpose()), Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    return false;
  }
  const Vector& ev = solver.eigenvalues();
  const double scale = std::max(1.0, ev.cwiseAbs().maxCoeff());
  return ev.minCoeff() >= -tolerance * scale;
}

BoundingBox build_box(const DistanceFn& distance, const OptimisationResult& result, double eps,
                      const LineSearchSettings& settings, const Matrix& curvature) {
  const Matrix axes = curvature_axes(curvature);
  const Eigen::Index dim = axes.cols();
  Vector lower(dim);
  Vector upper(dim);
  for (Eigen::Index m = 0; m < dim; ++m) {
    const Vector v = axes.col(m);
    upper[m] = line_search_extent(distance, result.x_min, v, eps, settings);
    lower[m] = -line_search_extent(distance, result.x_min, -v, eps, settings);
  }
  return BoundingBox(axes, result.x_min, std::move(lower), std::move(upper));
}

RegionPlotData region_plot_data(const ProposalRegion& region, const DistanceFn& distance, std::size_t grid) {
  const auto& box = region.box();
  if (box.dimension() > 2) {
    throw UnsupportedDimension("region_plot_data: only D <= 2 can be visualized");
  }
  if (grid < 2) {
    throw InvalidArgument("region_plot_data: grid must be at least 2");
  }
  RegionPlotData data;
  data.corners = box.corner_polyline();

  const auto dim = static_cast<Eigen::Index>(box.dimension());
  // Padded axis-aligned hull of the corners.
  Vector lo = data.corners.front();
  Vector hi = data.corners.front();
  for (const auto& c : data.corners) {
    lo = lo.cwiseMin(c);
    hi = hi.cwiseMax(c);
  }
  const Vector pad = 0.2 * (hi - lo);
  lo -= pad;
  hi += pad;
  for (Eigen::Index m = 0; m < dim; ++m) {
    data.axes.push_back(Vector::LinSpaced(static_cast<Eigen::Index>(grid), lo[m], hi[m]));
  }
  if (dim == 1) {
    for (Eigen::Index i = 0; i < data.axes[0].size(); ++i) {
      data.distances.push_back(distance(ParameterPoint::Constant(1, data.axes[0][i])));
    }
  } else {
    ParameterPoint p(2);
    for (Eigen::Index i = 0; i < data.axes[0].size(); ++i) {
      for (Eigen::Index j = 0; j < data.axes[1].size(); ++j) {
        p << data.axes[0][i], data.axes[1][j];
        data.distances.push_back(distance(p));
      }
    }
  }
  return data;
}

}  // namespace romc
