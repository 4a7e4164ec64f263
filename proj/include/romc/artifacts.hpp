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

#ifndef ROMC_ARTIFACTS_HPP
#define ROMC_ARTIFACTS_HPP

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include <romc/engine.hpp>
#include <romc/inference.hpp>
#include <romc/optimize.hpp>

/**
 * \file
 * \brief Persisted pipeline state: JSON records for solutions and regions, CSV for samples and plot data.
 *
 * Every JSON artifact carries `schema_version` and a `provenance` object holding
 * the configuration and master seed that produced it. Doubles are written in
 * shortest round-trip form, so a restored pipeline reproduces the original
 * results bit for bit.
 */

namespace romc::artifacts {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

[[nodiscard]] Json vector_to_json(const Vector& v);
[[nodiscard]] Vector vector_from_json(const Json& j);
/// Nested rows (row-major).
[[nodiscard]] Json matrix_to_json(const Matrix& m);
[[nodiscard]] Matrix matrix_from_json(const Json& j);

[[nodiscard]] Json gp_to_json(const GaussianProcess& gp);
[[nodiscard]] GaussianProcess gp_from_json(const Json& j);

/// Per-problem seed, status, x_min, f_min, hess_appr, solver counters and the BO surrogate.
[[nodiscard]] Json solutions_to_json(const Romc& romc, const Json& provenance);
/// Restores the problems into `romc`; the master seed is read from the provenance.
void restore_solutions(Romc& romc, const Json& doc);

/// Region records: index, seed, center, rotation, limits, eps and quadratic coefficients.
[[nodiscard]] Json regions_to_json(const Romc& romc, const Json& provenance);
void restore_regions(Romc& romc, const Json& doc);

[[nodiscard]] Json summary_to_json(const SampleSummary& summary);

/// problem_index,seed,status,f_min,iterations,evaluations,wall_seconds
[[nodiscard]] std::string telemetry_csv(const Romc& romc);
[[nodiscard]] std::string histogram_csv(const std::vector<HistogramBin>& bins);
/// problem_index,draw_index,theta_1..theta_D,weight
[[nodiscard]] std::string samples_csv(const InferenceResult& result);
[[nodiscard]] InferenceResult samples_from_csv(const std::string& text);
/// kind,theta_1..theta_D,distance with kind "corner" or "grid".
[[nodiscard]] std::string region_plot_csv(const RegionPlotData& data);

/// Shortest representation that parses back to the same double.
[[nodiscard]] std::string format_double(double v);

[[nodiscard]] Json make_provenance(const Json& config, Seed master_seed);
[[nodiscard]] Json read_json(const std::filesystem::path& path);
[[nodiscard]] std::string read_text(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, const std::string& text);
void write_json(const std::filesystem::path& path, const Json& doc);

}  // namespace romc::artifacts

#endif
