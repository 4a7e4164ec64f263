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

#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "pipeline.hpp"

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitNumerical = 2;

}  // namespace

int main(int argc, char** argv) {
  using romc::cli::Settings;
  Settings s;
  double eps = 0.0;
  double quantile = 0.0;
  romc::Seed sample_seed = 0;
  bool quiet = false;
  std::string out = s.out.string();

  CLI::App app{"Robust Optimization Monte Carlo: likelihood-free inference from a seeded simulator"};
  app.set_config("--config", "", "key = value file mirroring the flags (flags take precedence)");
  app.require_subcommand(1);
  app.fallthrough();

  app.add_option("--model", s.model, "Bundled model")->check(CLI::IsMember({"1d", "ma2"}))->capture_default_str();
  app.add_option("--obs-seed", s.obs_seed, "Observation seed for ma2 (0 = bundled default)");
  app.add_option("--out", out, "Artifact directory")->capture_default_str();
  app.add_option("--workers", s.workers, "Worker threads (0 = all cores)")->capture_default_str();
  app.add_flag("--quiet", quiet, "Suppress warnings");

  app.add_option("--n1", s.n1, "Number of optimization problems")->check(CLI::PositiveNumber)->capture_default_str();
  app.add_option("--seed", s.seed, "Master seed")->capture_default_str();
  app.add_flag("--use-bo", s.use_bo, "Bayesian optimization instead of the gradient solver");
  app.add_option("--budget", s.budget, "BO evaluation budget")->check(CLI::PositiveNumber)->capture_default_str();
  app.add_option("--init-points", s.init_points, "BO initial design size")->check(CLI::PositiveNumber)->capture_default_str();
  app.add_option("--restarts", s.restarts, "Gradient solver restarts")->check(CLI::PositiveNumber)->capture_default_str();
  app.add_option("--bins", s.bins, "Distance histogram bins")->check(CLI::PositiveNumber)->capture_default_str();

  auto* eps_opt = app.add_option("--eps", eps, "Acceptance threshold (overrides --quantile)");
  auto* quantile_opt = app.add_option("--quantile", quantile, "Threshold as a quantile of the solved distances (default 0.9)");
  app.add_flag("--fit-models", s.fit_models, "Fit local quadratic surrogates inside each region");
  app.add_flag("--no-surrogate", s.no_surrogate, "Use the real distance even when BO built a surrogate");
  app.add_option("--plot-regions", s.plot_regions, "Regions with plot data (D <= 2)")->capture_default_str();
  app.add_option("--plot-grid", s.plot_grid, "Grid points per axis for region plots")->capture_default_str();

  app.add_option("--n2", s.n2, "Samples per region")->check(CLI::PositiveNumber)->capture_default_str();
  auto* sample_seed_opt = app.add_option("--sample-seed", sample_seed, "Sampling seed (default: master seed)");
  app.add_option("--marginal-bins", s.marginal_bins, "Bins of the marginal histograms")->capture_default_str();

  app.add_option("--grid-step", s.grid_step, "Riemann grid spacing (0 = default)")->capture_default_str();
  app.add_option("--reference", s.reference, "Reference density: auto, oracle, rejection, none")->capture_default_str();
  app.add_option("--divergence", s.divergence, "js or kl")->capture_default_str();
  app.add_option("--rejection-draws", s.rejection_draws, "Rejection ABC draws")->capture_default_str();
  app.add_option("--rejection-quantile", s.rejection_quantile, "Rejection ABC acceptance quantile")->capture_default_str();

  auto* solve = app.add_subcommand("solve", "Draw nuisance seeds and solve the optimization problems");
  auto* regions = app.add_subcommand("regions", "Filter solutions by eps and build proposal regions");
  auto* sample = app.add_subcommand("sample", "Draw weighted posterior samples from the regions");
  auto* posterior = app.add_subcommand("posterior", "Evaluate the normalized posterior on the prior grid");
  auto* evaluate = app.add_subcommand("evaluate", "ESS, expectations and divergence against a reference");
  auto* bench = app.add_subcommand("bench", "Time training at one worker and at all cores");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  s.out = out;
  if (eps_opt->count() > 0) {
    s.eps = eps;
  }
  if (quantile_opt->count() > 0) {
    s.quantile = quantile;
  }
  if (sample_seed_opt->count() > 0) {
    s.sample_seed = sample_seed;
  }
  romc::set_warnings_enabled(!quiet);

  try {
    if (solve->parsed()) {
      romc::cli::cmd_solve(s, std::cout);
    } else if (regions->parsed()) {
      romc::cli::cmd_regions(s, std::cout);
    } else if (sample->parsed()) {
      romc::cli::cmd_sample(s, std::cout);
    } else if (posterior->parsed()) {
      romc::cli::cmd_posterior(s, std::cout);
    } else if (evaluate->parsed()) {
      romc::cli::cmd_evaluate(s, std::cout);
    } else if (bench->parsed()) {
      romc::cli::cmd_bench(s, std::cout);
    }
  } catch (const romc::InvalidArgument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const romc::InvalidState& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const romc::UnsupportedDimension& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: malformed artifact: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  }
  return 0;
}
