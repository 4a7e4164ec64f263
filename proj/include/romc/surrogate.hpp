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

#ifndef ROMC_SURROGATE_HPP
#define ROMC_SURROGATE_HPP

#include <cstddef>
#include <map>
#include <memory>

#include <romc/regions.hpp>
#include <romc/types.hpp>

namespace romc {

/// Cheap stand-in for d_i inside one proposal region.
class LocalSurrogate {
 public:
  virtual ~LocalSurrogate() = default;

  [[nodiscard]] virtual double predict(const ParameterPoint& theta) const = 0;
  [[nodiscard]] virtual std::size_t training_size() const = 0;
  [[nodiscard]] virtual std::size_t region_index() const = 0;
};

/// c + b^T x + x^T A x with x = theta - origin and A symmetric.
class QuadraticSurrogate final : public LocalSurrogate {
 public:
  QuadraticSurrogate(ParameterPoint origin, double constant, Vector linear, Matrix quadratic,
                     std::size_t training_size, std::size_t region_index);

  [[nodiscard]] double predict(const ParameterPoint& theta) const override;
  [[nodiscard]] std::size_t training_size() const override { return training_size_; }
  [[nodiscard]] std::size_t region_index() const override { return region_index_; }

  [[nodiscard]] const ParameterPoint& origin() const noexcept { return origin_; }
  [[nodiscard]] double constant() const noexcept { return constant_; }
  [[nodiscard]] const Vector& linear() const noexcept { return linear_; }
  [[nodiscard]] const Matrix& quadratic() const noexcept { return quadratic_; }

 private:
  ParameterPoint origin_;
  double constant_;
  Vector linear_;
  Matrix quadratic_;
  std::size_t training_size_;
  std::size_t region_index_;
};

/// 1 + D + D(D+1)/2.
[[nodiscard]] constexpr std::size_t quadratic_feature_count(std::size_t dim) {
  return 1 + dim + dim * (dim + 1) / 2;
}

/// 20 features' worth of samples, capped at 500.
[[nodiscard]] std::size_t default_training_size(std::size_t dim);

/// Least-squares quadratic fit on n_train samples drawn from the region, centred
/// at the box center. Falls back to a ridge fit (lambda = 1e-8) when the design
/// matrix is rank deficient.
[[nodiscard]] std::shared_ptr<const QuadraticSurrogate> fit_quadratic(const DistanceFn& distance,
                                                                      const ProposalRegion& region,
                                                                      std::size_t n_train, Seed seed,
                                                                      std::size_t region_index = 0);

/// Picks the distance used for a problem during inference: the local surrogate
/// if one was fitted, else the BO surrogate if BO ran (and is enabled), else d_i.
class SurrogateRegistry {
 public:
  void set_objective(std::size_t index, DistanceFn objective);
  void set_bo_surrogate(std::size_t index, DistanceFn surrogate);
  void set_local_surrogate(std::size_t index, std::shared_ptr<const LocalSurrogate> surrogate);
  void clear_local_surrogates() { local_.clear(); }

  /// Whether a BO surrogate replaces the real distance (default true).
  void set_use_bo_surrogate(bool use) { use_bo_surrogate_ = use; }
  [[nodiscard]] bool use_bo_surrogate() const noexcept { return use_bo_surrogate_; }

  /// Distance for inference. Throws InvalidArgument for unknown indices.
  [[nodiscard]] DistanceFn distance(std::size_t index) const;

  /// Distance for region construction and surrogate training: never the local surrogate.
  [[nodiscard]] DistanceFn region_distance(std::size_t index) const;

  [[nodiscard]] bool has_local_surrogate(std::size_t index) const { return local_.contains(index); }
  [[nodiscard]] std::shared_ptr<const LocalSurrogate> local_surrogate(std::size_t index) const;

 private:
  std::map<std::size_t, DistanceFn> objectives_;
  std::map<std::size_t, DistanceFn> bo_;
  std::map<std::size_t, std::shared_ptr<const LocalSurrogate>> local_;
  bool use_bo_surrogate_ = true;
};

}  // namespace romc

#endif
