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

#ifndef ROMC_TOOLS_PIPELINE_HPP
#define ROMC_TOOLS_PIPELINE_HPP

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include <romc/artifacts.hpp>
#include <romc/engine.hpp>

namespace romc::cli {

struct Settings {
  std::string model = "1d";
  Seed obs_seed = 0;  // 0 selects the bundled default
  std::filesystem::path out = "romc_out";
  std::size_t workers = 1;

  std::size_t n1 = 500;
  Seed seed = 21;
  bool use_bo = false;
  int budget = 40;
  int init_points = 10;
  int restarts = 1;
  std::size_t bins = 50;

  std::optional<double> eps;
  std::optional<double> quantile;
  bool fit_models = false;
  bool no_surrogate = false;
  std::size_t plot_regions = 5;
  std::size_t plot_grid = 50;

  std::size_t n2 = 50;
  std::optional<Seed> sample_seed;
  std::size_t marginal_bins = 50;

  double grid_step = 0.0;  // 0 selects the default
  std::string reference = "auto";
  std::string divergence = "js";
  std::size_t rejection_draws = 100000;
  double rejection_quantile = 0.01;
};

inline constexpr double kDefaultQuantile = 0.9;

/// Model selected by name and observation seed.
[[nodiscard]] std::shared_ptr<const Model> build_model(const std::string& name, Seed obs_seed);

/// Solve stage: writes solutions.json, telemetry.csv and histogram.csv.
void cmd_solve(const Settings& s, std::ostream& log);
/// Filters and builds regions from solutions.json: writes regions.json and region plot data.
void cmd_regions(const Settings& s, std::ostream& log);
/// Samples from the stored regions: writes samples.csv, summary.json and marginals.csv.
void cmd_sample(const Settings& s, std::ostream& log);
/// Normalized posterior on the prior grid: writes posterior.csv and posterior.json.
void cmd_posterior(const Settings& s, std::ostream& log);
/// ESS, expectations and divergence against a reference: writes evaluate.json.
void cmd_evaluate(const Settings& s, std::ostream& log);
/// Training at one worker and at all cores: writes bench.json.
void cmd_bench(const Settings& s, std::ostream& log);

/// Solve + regions in memory; returns the serialized solutions and regions documents.
struct TrainingArtifacts {
  std::string solutions;
  std::string regions;
  double seconds = 0.0;
};
[[nodiscard]] TrainingArtifacts train_in_memory(const Settings& s, std::size_t workers);

}  // namespace romc::cli

#endif
