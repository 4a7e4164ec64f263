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

#ifndef ROMC_GAUSSIAN_PROCESS_HPP
#define ROMC_GAUSSIAN_PROCESS_HPP

#include <vector>

#include <romc/types.hpp>

namespace romc {

struct GaussianProcessHyperparameters {
  Vector lengthscales;
  double kernel_variance = 1.0;
  double noise_variance = 1e-6;
  /// Constant prior mean.
  double mean = 0.0;
};

/// Exact GP regression with a squared-exponential (ARD) kernel.
class GaussianProcess {
 public:
  struct Prediction {
    double mean;
    double variance;
  };

  /// Fits with heuristic hyperparameters: per-axis median pairwise distance as
  /// lengthscale, sample variance of the targets as kernel variance, noise at
  /// 1e-6 of the kernel variance and the target mean as constant mean.
  [[nodiscard]] static GaussianProcess fit(const Matrix& inputs, const Vector& values);

  /// Rebuilds a GP from stored data and hyperparameters. Escalates jitter when the
  /// kernel matrix is not positive definite; throws NumericalFailure if that fails.
  GaussianProcess(Matrix inputs, Vector values, GaussianProcessHyperparameters hyper);

  [[nodiscard]] Prediction predict(const ParameterPoint& x) const;
  [[nodiscard]] double predict_mean(const ParameterPoint& x) const;

  /// Row-wise predictions for a batch of points (one point per row).
  void predict_batch(const Matrix& points, Vector& mean, Vector& variance) const;

  [[nodiscard]] const Matrix& inputs() const noexcept { return inputs_; }
  [[nodiscard]] const Vector& values() const noexcept { return values_; }
  [[nodiscard]] const GaussianProcessHyperparameters& hyperparameters() const noexcept { return hyper_; }
  [[nodiscard]] std::size_t size() const noexcept { return static_cast<std::size_t>(inputs_.rows()); }

 private:
  [[nodiscard]] Matrix cross_kernel(const Matrix& points) const;

  Matrix inputs_;  // n x D
  Vector values_;
  GaussianProcessHyperparameters hyper_;
  Eigen::LLT<Matrix> cholesky_;
  Vector alpha_;
};

}  // namespace romc

#endif
