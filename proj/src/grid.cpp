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

#include <romc/grid.hpp>

#include <cmath>

namespace romc {

MidpointGrid::MidpointGrid(std::vector<Interval> bounds, double step) : bounds_(std::move(bounds)) {
  if (bounds_.empty()) {
    throw InvalidArgument("MidpointGrid: no dimensions");
  }
  if (!(step > 0.0)) {
    throw InvalidArgument("MidpointGrid: step must be positive");
  }
  spacing_.resize(static_cast<Eigen::Index>(bounds_.size()));
  for (std::size_t m = 0; m < bounds_.size(); ++m) {
    const double width = bounds_[m].width();
    if (!(width > 0.0) || !std::isfinite(width)) {
      throw InvalidArgument("MidpointGrid: bounds must be finite with low < high");
    }
    const auto n = static_cast<std::size_t>(std::max(1.0, std::round(width / step)));
    cells_.push_back(n);
    spacing_[static_cast<Eigen::Index>(m)] = width / static_cast<double>(n);
    cell_volume_ *= width / static_cast<double>(n);
    size_ *= n;
  }
}

ParameterPoint MidpointGrid::midpoint(std::size_t flat) const {
  ParameterPoint p(static_cast<Eigen::Index>(bounds_.size()));
  for (std::size_t m = bounds_.size(); m-- > 0;) {
    const std::size_t i = flat % cells_[m];
    flat /= cells_[m];
    const auto e = static_cast<Eigen::Index>(m);
    p[e] = bounds_[m].low + (static_cast<double>(i) + 0.5) * spacing_[e];
  }
  return p;
}

}  // namespace romc
