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

#ifndef ROMC_GRID_HPP
#define ROMC_GRID_HPP

#include <cstddef>
#include <vector>

#include <romc/model.hpp>
#include <romc/types.hpp>

namespace romc {

/// Cell-centred tensor grid for midpoint-rule quadrature over a box.
class MidpointGrid {
 public:
  /// Cells per axis: max(1, round(width / step)); the actual spacing then divides the width exactly.
  MidpointGrid(std::vector<Interval> bounds, double step);

  [[nodiscard]] std::size_t dimension() const noexcept { return bounds_.size(); }
  [[nodiscard]] std::size_t size() const noexcept { return size_; }
  [[nodiscard]] const std::vector<Interval>& bounds() const noexcept { return bounds_; }
  [[nodiscard]] const std::vector<std::size_t>& cells() const noexcept { return cells_; }
  [[nodiscard]] const Vector& spacing() const noexcept { return spacing_; }
  [[nodiscard]] double cell_volume() const noexcept { return cell_volume_; }

  /// Midpoint of the cell with the given flat index (last axis varies fastest).
  [[nodiscard]] ParameterPoint midpoint(std::size_t flat) const;

 private:
  std::vector<Interval> bounds_;
  std::vector<std::size_t> cells_;
  Vector spacing_;
  double cell_volume_ = 1.0;
  std::size_t size_ = 1;
};

}  // namespace romc

#endif
