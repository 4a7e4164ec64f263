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

#include <romc/surrogate.hpp>

#include <algorithm>
#include <sstream>

namespace romc {

namespace {
constexpr double kRidge = 1e-8;
constexpr std::size_t kMaxTrainingSize = 500;
}  // namespace

QuadraticSurrogate::QuadraticSurrogate(ParameterPoint origin, double constant, Vector linear, Matrix quadratic,
                                       std::size_t training_size, std::size_t region_index)
    : origin_(std::move(origin)),
      constant_(constant),
      linear_(std::move(linear)),
      quadratic_(std::move(quadratic)),
      training_size_(training_size),
      region_index_(region_index) {
  const Eigen::Index dim = origin_.size();
  if (linear_.size() != dim || quadratic_.rows() != dim || quadratic_.cols() != dim) {
    throw InvalidArgument("QuadraticSurrogate: inconsistent coefficient shapes");
  }
  quadratic_ = 0.5 * (quadratic_ + quadratic_.transpose()).eval();
}

double QuadraticSurrogate::predict(const ParameterPoint& theta) const {
  const Vector x = theta - origin_;
  return constant_ + linear_.dot(x) + x.dot(quadratic_ * x);
}

std::size_t default_training_size(std::size_t dim) {
  return std::min<std::size_t>(20 * quadratic_feature_count(dim), kMaxTrainingSize);
}

std::shared_ptr<const QuadraticSurrogate> fit_quadratic(const DistanceFn& distance, const ProposalRegion& region,
                                                        std::size_t n_train, Seed seed, std::size_t region_index) {
  const std::size_t dim = region.box().dimension();
  const std::size_t n_features = quadratic_feature_count(dim);
  if (n_train < n_features) {
    std::ostringstream msg;
    msg << "fit_quadratic: n_train = " << n_train << " is below the " << n_features << " quadratic features";
    throw InvalidArgument(msg.str());
  }
  const ParameterPoint& origin = region.box().center();
  const auto points = region.sample(n_train, seed);

  const auto rows = static_cast<Eigen::Index>(n_train);
  Matrix design(rows, static_cast<Eigen::Index>(n_features));
  Vector targets(rows);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const ParameterPoint& theta = points[static_cast<std::size_t>(r)];
    targets[r] = distance(theta);
    const Vector x = theta - origin;
    Eigen::Index c = 0;
    design(r, c++) = 1.0;
    for (Eigen::Index a = 0; a < x.size(); ++a) {
      design(r, c++) = x[a];
    }
    for (Eigen::Index a = 0; a < x.size(); ++a) {
      for (Eigen::Index b = a; b < x.size(); ++b) {
        design(r, c++) = x[a] * x[b];
      }
    }
  }
  if (!targets.allFinite()) {
    throw NumericalFailure("fit_quadratic: non-finite training target", origin);
  }

  // Column scaling keeps the pivoted QR rank decision independent of the box size.
  Vector scale = design.colwise().norm().transpose();
  for (Eigen::Index c = 0; c < scale.size(); ++c) {
    if (scale[c] == 0.0) {
      scale[c] = 1.0;
    }
  }
  const Matrix scaled = design * scale.cwiseInverse().asDiagonal();
  Eigen::ColPivHouseholderQR<Matrix> qr(scaled);
  Vector coef;
  if (qr.rank() == scaled.cols()) {
    coef = qr.solve(targets);
  } else {
    warn("fit_quadratic: rank-deficient design matrix, using ridge regularization");
    Matrix normal = scaled.transpose() * scaled;
    normal.diagonal().array() += kRidge;
    coef = normal.ldlt().solve(scaled.transpose() * targets);
  }
  coef = coef.cwiseQuotient(scale);

  const auto d = static_cast<Eigen::Index>(dim);
  Vector linear = coef.segment(1, d);
  Matrix quadratic = Matrix::Zero(d, d);
  Eigen::Index c = 1 + d;
  for (Eigen::Index a = 0; a < d; ++a) {
    for (Eigen::Index b = a; b < d; ++b) {
      if (a == b) {
        quadratic(a, a) = coef[c];
      } else {
        quadratic(a, b) = 0.5 * coef[c];
        quadratic(b, a) = 0.5 * coef[c];
      }
      ++c;
    }
  }
  return std::make_shared<QuadraticSurrogate>(origin, coef[0], std::move(linear), std::move(quadratic), n_train,
                                              region_index);
}

void SurrogateRegistry::set_objective(std::size_t index, DistanceFn objective) {
  objectives_[index] = std::move(objective);
}

void SurrogateRegistry::set_bo_surrogate(std::size_t index, DistanceFn surrogate) {
  bo_[index] = std::move(surrogate);
}

void SurrogateRegistry::set_local_surrogate(std::size_t index, std::shared_ptr<const LocalSurrogate> surrogate) {
  local_[index] = std::move(surrogate);
}

DistanceFn SurrogateRegistry::region_distance(std::size_t index) const {
  const auto obj = objectives_.find(index);
  if (obj == objectives_.end()) {
    std::ostringstream msg;
    msg << "surrogate registry: unknown problem index " << index;
    throw InvalidArgument(msg.str());
  }
  if (use_bo_surrogate_) {
    if (const auto bo = bo_.find(index); bo != bo_.end()) {
      return bo->second;
    }
  }
  return obj->second;
}

DistanceFn SurrogateRegistry::distance(std::size_t index) const {
  DistanceFn fallback = region_distance(index);
  if (const auto local = local_.find(index); local != local_.end()) {
    std::shared_ptr<const LocalSurrogate> surrogate = local->second;
    return [surrogate](const ParameterPoint& theta) { return surrogate->predict(theta); };
  }
  return fallback;
}

std::shared_ptr<const LocalSurrogate> SurrogateRegistry::local_surrogate(std::size_t index) const {
  const auto it = local_.find(index);
  return it == local_.end() ? nullptr : it->second;
}

}  // namespace romc
