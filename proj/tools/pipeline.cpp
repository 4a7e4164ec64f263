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

#include "pipeline.hpp"

#include <chrono>
#include <ostream>
#include <sstream>

#include <romc/benchmarks.hpp>
#include <romc/evaluate.hpp>
#include <romc/parallel.hpp>

namespace romc::cli {

namespace fs = std::filesystem;
using artifacts::Json;

namespace {

constexpr const char* kSolutionsFile = "solutions.json";
constexpr const char* kRegionsFile = "regions.json";
constexpr const char* kSamplesFile = "samples.csv";

Seed effective_obs_seed(const Settings& s) { return s.obs_seed == 0 ? benchmarks::kMa2DefaultObservationSeed : s.obs_seed; }

Json solve_config(const Settings& s) {
  Json c{{"model", s.model}};
  if (s.model == "ma2") {
    c["obs_seed"] = effective_obs_seed(s);
  }
  c["n1"] = s.n1;
  c["optimizer"] = s.use_bo ? "bo" : "gradient";
  if (s.use_bo) {
    c["budget"] = s.budget;
    c["init_points"] = s.init_points;
  } else {
    c["restarts"] = s.restarts;
  }
  return c;
}

std::shared_ptr<const Optimizer> make_optimizer(const Settings& s) {
  if (s.use_bo) {
    BayesianSolverOptions o;
    o.budget = s.budget;
    o.init_points = s.init_points;
    return std::make_shared<BayesianOptimizer>(o);
  }
  GradientSolverOptions o;
  o.restarts = s.restarts;
  return std::make_shared<GradientOptimizer>(o);
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

/// Rebuilds the model from the stored configuration and restores the solutions.
Romc load_solutions(const Settings& s, Json& doc) {
  doc = artifacts::read_json(s.out / kSolutionsFile);
  const Json& config = doc.at("provenance").at("config");
  const Seed obs = config.contains("obs_seed") ? config.at("obs_seed").get<Seed>() : 0;
  Romc romc(build_model(config.at("model").get<std::string>(), obs));
  artifacts::restore_solutions(romc, doc);
  return romc;
}

Romc load_regions(const Settings& s, Json& config) {
  Json solutions;
  Romc romc = load_solutions(s, solutions);
  const Json regions = artifacts::read_json(s.out / kRegionsFile);
  artifacts::restore_regions(romc, regions);
  config = regions.at("provenance").at("config");
  return romc;
}

double resolve_eps(const Settings& s, const Romc& romc, Json& config) {
  if (s.eps) {
    if (!(*s.eps > 0.0)) {
      throw InvalidArgument("--eps must be positive");
    }
    config["eps"] = *s.eps;
    return *s.eps;
  }
  const double q = s.quantile.value_or(kDefaultQuantile);
  if (q < 0.0 || q > 1.0) {
    throw InvalidArgument("--quantile must lie in [0, 1]");
  }
  config["quantile"] = q;
  const double eps = romc.compute_eps(q);
  if (!(eps > 0.0)) {
    throw DegenerateResult("the selected quantile gives eps = 0; pass --eps or a larger --quantile");
  }
  return eps;
}

void train(const Settings& s, Romc& romc, Json& config, std::size_t workers) {
  romc.set_optimizer(make_optimizer(s));
  romc.solve_all(s.n1, s.seed, workers);
  config = solve_config(s);
  const double eps = resolve_eps(s, romc, config);
  config["fit_models"] = s.fit_models;
  config["use_surrogate"] = !s.no_surrogate;
  romc.estimate_regions(eps, !s.no_surrogate, s.fit_models, workers);
}

}  // namespace

std::shared_ptr<const Model> build_model(const std::string& name, Seed obs_seed) {
  if (name == "ma2") {
    return benchmarks::model_ma2(benchmarks::kMa2DefaultLength, ParameterPoint{{0.6, 0.2}},
                                 obs_seed == 0 ? benchmarks::kMa2DefaultObservationSeed : obs_seed);
  }
  return benchmarks::model_by_name(name);
}

void cmd_solve(const Settings& s, std::ostream& log) {
  Romc romc(build_model(s.model, s.obs_seed));
  romc.set_optimizer(make_optimizer(s));
  const auto start = std::chrono::steady_clock::now();
  romc.solve_all(s.n1, s.seed, s.workers);
  const double elapsed = seconds_since(start);

  artifacts::write_json(s.out / kSolutionsFile,
                        artifacts::solutions_to_json(romc, artifacts::make_provenance(solve_config(s), s.seed)));
  artifacts::write_text(s.out / "telemetry.csv", artifacts::telemetry_csv(romc));
  if (romc.solved_count() > 0) {
    artifacts::write_text(s.out / "histogram.csv", artifacts::histogram_csv(romc.distance_hist(s.bins)));
  }
  log << "solved " << romc.solved_count() << " of " << s.n1 << " problems in " << elapsed << " s\n";
  log << "wrote " << (s.out / kSolutionsFile).string() << ", telemetry.csv, histogram.csv\n";
}

void cmd_regions(const Settings& s, std::ostream& log) {
  Json solutions;
  Romc romc = load_solutions(s, solutions);
  Json config = solutions.at("provenance").at("config");
  const double eps = resolve_eps(s, romc, config);
  config["fit_models"] = s.fit_models;
  config["use_surrogate"] = !s.no_surrogate;
  romc.estimate_regions(eps, !s.no_surrogate, s.fit_models, s.workers);

  artifacts::write_json(s.out / kRegionsFile,
                        artifacts::regions_to_json(romc, artifacts::make_provenance(config, romc.master_seed())));
  std::size_t plotted = 0;
  if (romc.model().dimension() <= 2) {
    for (const auto& r : romc.regions()) {
      if (plotted >= s.plot_regions) {
        break;
      }
      const auto data = region_plot_data(r.region, romc.registry().region_distance(r.index), s.plot_grid);
      artifacts::write_text(s.out / "region_plots" / ("region_" + std::to_string(r.index) + ".csv"),
                            artifacts::region_plot_csv(data));
      ++plotted;
    }
  }
  log << "eps = " << artifacts::format_double(eps) << ", " << romc.regions().size() << " regions";
  if (!romc.failed_regions().empty()) {
    log << " (" << romc.failed_regions().size() << " failed)";
  }
  log << "\nwrote " << (s.out / kRegionsFile).string() << " and " << plotted << " region plot files\n";
}

void cmd_sample(const Settings& s, std::ostream& log) {
  Json config;
  const Romc romc = load_regions(s, config);
  const Seed seed = s.sample_seed.value_or(romc.master_seed());
  config["n2"] = s.n2;
  config["sample_seed"] = seed;
  const InferenceResult result = romc.sample(s.n2, seed, s.workers);
  artifacts::write_text(s.out / kSamplesFile, artifacts::samples_csv(result));

  const SampleSummary summary = summarize(result);
  Json doc{{"schema_version", artifacts::kSchemaVersion},
           {"kind", "summary"},
           {"provenance", artifacts::make_provenance(config, romc.master_seed())},
           {"n1_accepted", result.n1_accepted},
           {"n2", result.n2},
           {"summary", artifacts::summary_to_json(summary)}};
  artifacts::write_json(s.out / "summary.json", doc);

  std::ostringstream marg;
  marg << "parameter,bin_left,bin_right,weight\n";
  const auto& bounds = romc.model().prior->bounds();
  for (std::size_t m = 0; m < bounds.size(); ++m) {
    const auto hist = weighted_marginal(result, m, bounds[m].low, bounds[m].high, s.marginal_bins);
    const double width = bounds[m].width() / static_cast<double>(s.marginal_bins);
    for (std::size_t b = 0; b < hist.size(); ++b) {
      marg << "theta_" << m + 1 << ',' << artifacts::format_double(bounds[m].low + width * static_cast<double>(b))
           << ',' << artifacts::format_double(bounds[m].low + width * static_cast<double>(b + 1)) << ','
           << artifacts::format_double(hist[b]) << '\n';
    }
  }
  artifacts::write_text(s.out / "marginals.csv", marg.str());

  log << "Number of samples: " << summary.n_samples << " (" << summary.n_nonzero << " with positive weight)\n";
  for (std::size_t m = 0; m < summary.parameters.size(); ++m) {
    const auto& p = summary.parameters[m];
    log << "theta_" << m + 1 << ": mean " << p.mean << ", sd " << p.sd << ", 2.5% " << p.q025 << ", 97.5% " << p.q975
        << '\n';
  }
}

void cmd_posterior(const Settings& s, std::ostream& log) {
  Json config;
  const Romc romc = load_regions(s, config);
  const double step = s.grid_step > 0.0 ? s.grid_step : default_grid_step(*romc.model().prior);
  const PosteriorDensity density = romc.posterior_density(step, s.workers);
  const MidpointGrid& grid = density.grid();

  std::ostringstream out;
  for (std::size_t m = 0; m < grid.dimension(); ++m) {
    out << "theta_" << m + 1 << ',';
  }
  out << "unnormalized,density\n";
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const ParameterPoint theta = grid.midpoint(i);
    for (Eigen::Index m = 0; m < theta.size(); ++m) {
      out << artifacts::format_double(theta[m]) << ',';
    }
    const double u = density.grid_values()[i];
    out << artifacts::format_double(u) << ',' << artifacts::format_double(u / density.partition()) << '\n';
  }
  artifacts::write_text(s.out / "posterior.csv", out.str());
  config["grid_step"] = step;
  artifacts::write_json(s.out / "posterior.json",
                        Json{{"schema_version", artifacts::kSchemaVersion},
                             {"kind", "posterior"},
                             {"provenance", artifacts::make_provenance(config, romc.master_seed())},
                             {"grid_step", step},
                             {"cells", grid.size()},
                             {"partition", density.partition()}});
  log << "partition function Z = " << density.partition() << " on " << grid.size() << " cells (step " << step
      << ")\n";
}

void cmd_evaluate(const Settings& s, std::ostream& log) {
  Json config;
  const Romc romc = load_regions(s, config);
  const InferenceResult result = artifacts::samples_from_csv(artifacts::read_text(s.out / kSamplesFile));
  const auto weights = result.weights();
  const double ess = compute_ess(weights);
  const double n = static_cast<double>(weights.size());
  const Vector mean = compute_expectation(result, [](const ParameterPoint& t) { return t; });
  const Vector second =
      compute_expectation(result, [](const ParameterPoint& t) { return Vector(t.array().square()); });

  Json doc{{"schema_version", artifacts::kSchemaVersion},
           {"kind", "evaluation"},
           {"provenance", artifacts::make_provenance(config, romc.master_seed())},
           {"ess", ess},
           {"n", weights.size()},
           {"ess_ratio", ess / n},
           {"expectation", artifacts::vector_to_json(mean)},
           {"second_moment", artifacts::vector_to_json(second)}};
  log << "ESS: " << ess << "\nN: " << weights.size() << "\nESS/N: " << ess / n << '\n';
  log << "E[theta]: " << mean.transpose() << "\nE[theta^2]: " << second.transpose() << '\n';

  std::string reference = s.reference;
  if (reference == "auto") {
    reference = romc.model().name == "1d" ? "oracle" : "rejection";
  }
  if (reference != "none") {
    const auto kind = parse_divergence_kind(s.divergence);
    const auto& prior = *romc.model().prior;
    double step = s.grid_step;
    double value = 0.0;
    if (reference == "oracle") {
      if (romc.model().name != "1d") {
        throw InvalidArgument("the exact posterior oracle exists only for the 1d model");
      }
      step = step > 0.0 ? step : default_grid_step(prior);
      const benchmarks::TruePosterior1d truth(step);
      value = romc.compute_divergence([&truth](const ParameterPoint& t) { return truth(t); }, step, kind, s.workers);
    } else if (reference == "rejection") {
      step = step > 0.0 ? step : default_grid_step(prior) * 5.0;
      const auto rejection =
          benchmarks::rejection_abc(romc.model(), s.rejection_draws, s.rejection_quantile, romc.master_seed(), s.workers);
      const SampleHistogramDensity ref(rejection.samples, prior.bounds(), step);
      value = romc.compute_divergence([&ref](const ParameterPoint& t) { return ref(t); }, step, kind, s.workers);
      doc["rejection_threshold"] = rejection.threshold;
    } else {
      throw InvalidArgument("unknown reference '" + reference + "' (expected auto, oracle, rejection or none)");
    }
    doc["reference"] = reference;
    doc["divergence_kind"] = kind == DivergenceKind::kJensenShannon ? "jensen-shannon" : "kl";
    doc["divergence"] = value;
    doc["grid_step"] = step;
    log << (kind == DivergenceKind::kJensenShannon ? "Jensen-Shannon" : "KL") << " divergence vs " << reference
        << ": " << value << "\ngrid step: " << step << '\n';
  }
  artifacts::write_json(s.out / "evaluate.json", doc);
}

TrainingArtifacts train_in_memory(const Settings& s, std::size_t workers) {
  Romc romc(build_model(s.model, s.obs_seed));
  Json config;
  const auto start = std::chrono::steady_clock::now();
  train(s, romc, config, workers);
  TrainingArtifacts out;
  out.seconds = seconds_since(start);
  out.solutions = artifacts::solutions_to_json(romc, artifacts::make_provenance(solve_config(s), s.seed)).dump(2);
  out.regions = artifacts::regions_to_json(romc, artifacts::make_provenance(config, s.seed)).dump(2);
  return out;
}

void cmd_bench(const Settings& s, std::ostream& log) {
  const std::size_t cores = available_cores();
  const TrainingArtifacts serial = train_in_memory(s, 1);
  const TrainingArtifacts parallel = train_in_memory(s, 0);
  const bool identical = serial.solutions == parallel.solutions && serial.regions == parallel.regions;
  const double speedup = serial.seconds / parallel.seconds;

  Json config = solve_config(s);
  artifacts::write_json(s.out / "bench.json", Json{{"schema_version", artifacts::kSchemaVersion},
                                                   {"kind", "bench"},
                                                   {"provenance", artifacts::make_provenance(config, s.seed)},
                                                   {"cores", cores},
                                                   {"seconds_workers_1", serial.seconds},
                                                   {"seconds_workers_all", parallel.seconds},
                                                   {"speedup", speedup},
                                                   {"identical_artifacts", identical}});
  log << "cores: " << cores << "\nworkers=1: " << serial.seconds << " s\nworkers=" << cores << ": "
      << parallel.seconds << " s\nspeedup: " << speedup << "\nidentical artifacts: " << (identical ? "yes" : "no")
      << '\n';
  if (cores < 4) {
    log << "note: fewer than 4 cores available; the speedup figure is not meaningful on this machine\n";
  }
  if (!identical) {
    throw Error("artifacts differ between worker counts");
  }
}

}  // namespace romc::cli
