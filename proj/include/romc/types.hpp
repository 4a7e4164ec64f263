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

#ifndef ROMC_TYPES_HPP
#define ROMC_TYPES_HPP

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

/**
 * \file
 * \brief Common aliases and the error hierarchy shared by every module.
 */

namespace romc {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// A point in parameter space; its length is the model's parameter dimension.
using ParameterPoint = Eigen::VectorXd;

/// Nuisance draw. Fixing it turns the stochastic simulator into a deterministic map.
using Seed = std::uint64_t;

/// Any scalar distance-like function of the parameters.
using DistanceFn = std::function<double(const ParameterPoint&)>;

/// Base class of all engine errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class InvalidState : public Error {
 public:
  using Error::Error;
};

class UnsupportedDimension : public Error {
 public:
  using Error::Error;
};

/// All weights (or the partition function) are zero.
class DegenerateResult : public Error {
 public:
  using Error::Error;
};

/// A function evaluation produced a non-finite value.
class NumericalFailure : public Error {
 public:
  NumericalFailure(const std::string& what, ParameterPoint probe)
      : Error(what), probe_(std::move(probe)) {}

  [[nodiscard]] const ParameterPoint& probe() const noexcept { return probe_; }

 private:
  ParameterPoint probe_;
};

/// Writes a warning line to stderr unless warnings are silenced.
void warn(const std::string& message);

/// Globally enable or disable warning output (tests silence it).
void set_warnings_enabled(bool enabled);

/// SplitMix64 finalizer, used to derive independent child seeds.
[[nodiscard]] constexpr std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) noexcept {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace romc

#endif
