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

#include <romc/gaussian_process.hpp>

#include <algorithm>
#include <cmath>

namespace romc {

namespace {

constexpr double kRelativeNoise = 1e-6;
constexpr int kMaxJitterEscalations = 8;

double median(std::vector<double> values) {
  const auto mid = values.begin() + static_cast<std::ptrdiff_t>(values.size() / 2);
  std::nth_element(values.begin(), mid, values.end());
  if (values.size() % 2 == 1) {
    return *mid;
  }
  const double upper = *mid;
  const double lower = *std::max_element(values.begin(), mid);
  return 0.5 * (lower + upper);
}

}  // namespace

GaussianProcess GaussianProcess::fit(const Matrix& inputs, const Vector& values) {
  if (inputs.rows() == 0 || inputs.rows() != values.size()) {
    throw InvalidArgument("GaussianProcess::fit: inputs and values must be non-empty and aligned");
  }
  const Eigen::Index n = inputs.rows();
  const Eigen::Index dim = inputs.cols();

  GaussianProcessHyperparameters hyper;
  hyper.lengthscales.resize(dim);
  for (Eigen::Index m = 0; m < dim; ++m) {
    std::vector<double> gaps;
    gaps.reserve(static_cast<std::size_t>(n * (n - 1) / 2));
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = i + 1; j < n; ++j) {
        gaps.push_back(std::abs(inputs(i, m) - inputs(j, m)));
      }
    }
    const double ell = gaps.empty() ? 1.0 : median(std::move(gaps));
    hyper.lengthscales[m] = ell > 0.0 ? ell : 1.0;
  }
  hyper.mean = values.mean();
  const double var = (values.array() - hyper.mean).square().mean();
  hyper.kernel_variance = var > 0.0 ? var : 1.0;
  hyper.noise_variance = kRelativeNoise * hyper.kernel_variance;
  return GaussianProcess(inputs, values, std::move(hyper));
}

GaussianProcess::GaussianProcess(Matrix inputs, Vector values, GaussianProcessHyperparameters hyper)
    : inputs_(std::move(inputs)), values_(std::move(values)), hyper_(std::move(hyper)) {
  if (inputs_.rows() != values_.size() || hyper_.lengthscales.size() != inputs_.cols()) {
    throw InvalidArgument("GaussianProcess: inconsistent data and hyperparameter shapes");
  }
  if (!(hyper_.kernel_variance > 0.0) || !(hyper_.noise_variance > 0.0) ||
      (hyper_.lengthscales.array() <= 0.0).any()) {
    throw InvalidArgument("GaussianProcess: hyperparameters must be positive");
  }
  const Matrix gram = cross_kernel(inputs_);
  double noise = hyper_.noise_variance;
  for (int attempt = 0; attempt <= kMaxJitterEscalations; ++attempt) {
    Matrix k = gram;
    k.diagonal().array() += noise;
    cholesky_.compute(k);
    if (cholesky_.info() == Eigen::Success) {
      hyper_.noise_variance = noise;
      alpha_ = cholesky_.solve((values_.array() - hyper_.mean).matrix());
      return;
    }
    noise *= 10.0;
  }
  throw NumericalFailure("GaussianProcess: kernel matrix not positive definite after jitter escalation",
                         ParameterPoint());
}

Matrix GaussianProcess::cross_kernel(const Matrix& points) const {
  const Eigen::Index n = inputs_.rows();
  Matrix k(n, points.rows());
  const Eigen::ArrayXd inv_ell = hyper_.lengthscales.array().inverse();
  for (Eigen::Index c = 0; c < points.rows(); ++c) {
    for (Eigen::Index i = 0; i < n; ++i) {
      const double r2 = ((inputs_.row(i) - points.row(c)).array().transpose() * inv_ell).square().sum();
      k(i, c) = hyper_.kernel_variance * std::exp(-0.5 * r2);
    }
  }
  return k;
}

GaussianProcess::Prediction GaussianProcess::predict(const ParameterPoint& x) const {
  Vector mean;
  Vector variance;
  predict_batch(x.transpose(), mean, variance);
  return {mean[0], variance[0]};
}

double GaussianProcess::predict_mean(const ParameterPoint& x) const {
  const Matrix k = cross_kernel(x.transpose());
  return hyper_.mean + k.col(0).dot(alpha_);
}

void GaussianProcess::predict_batch(const Matrix& points, Vector& mean, Vector& variance) const {
  const Matrix k = cross_kernel(points);
  mean = (k.transpose() * alpha_).array() + hyper_.mean;
  const Matrix v = cholesky_.matrixL().solve(k);
  variance = (hyper_.kernel_variance - v.colwise().squaredNorm().array()).max(0.0).matrix().transpose();
}

}  // namespace romc
