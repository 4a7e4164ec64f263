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

// Acceptance suite: one PASS/FAIL line per criterion. Exit status is nonzero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <memory>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <romc/artifacts.hpp>
#include <romc/benchmarks.hpp>
#include <romc/engine.hpp>
#include <romc/parallel.hpp>

using namespace romc;

namespace {

struct Verdict {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

int failures = 0;

void report(const std::string& id, const std::string& title, Verdict& v) {
  std::printf("%s %-4s %s:%s\n", v.pass ? "PASS" : "FAIL", id.c_str(), title.c_str(), v.detail.str().c_str());
  std::fflush(stdout);
  failures += v.pass ? 0 : 1;
}

void guarded(const std::string& id, const std::string& title, const std::function<void(Verdict&)>& body) {
  Verdict v;
  try {
    body(v);
  } catch (const std::exception& e) {
    v.pass = false;
    v.detail << " [exception: " << e.what() << "]";
  }
  report(id, title, v);
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

ParameterPoint pt(std::initializer_list<double> v) {
  ParameterPoint p(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (const double x : v) {
    p[i++] = x;
  }
  return p;
}

Vector identity(const ParameterPoint& t) { return t; }

// 1D running example, shared by C1 to C3.
struct Run1d {
  double seconds = 0.0;
  double js = 0.0;
  double mean = 0.0;
  double second = 0.0;
  double ess = 0.0;
  std::size_t n = 0;
};

Run1d run_1d() {
  const auto start = std::chrono::steady_clock::now();
  Romc romc(benchmarks::model_1d());
  romc.solve_problems(500, 21, false, 1);
  romc.estimate_regions(0.75, true, false, 1);
  const InferenceResult samples = romc.sample(50, 21, 1);
  Run1d out;
  out.mean = Romc::compute_expectation(samples, identity)[0];
  out.second = Romc::compute_expectation(samples, [](const ParameterPoint& t) { return Vector(t.array().square()); })[0];
  out.ess = Romc::compute_ess(samples);
  out.n = samples.samples.size();
  const double step = default_grid_step(*romc.model().prior);
  const benchmarks::TruePosterior1d truth(step);
  out.js = romc.compute_divergence([&truth](const ParameterPoint& t) { return truth(t); }, step,
                                   DivergenceKind::kJensenShannon, 1);
  out.seconds = seconds_since(start);
  return out;
}

Vector ma2_mean(const std::shared_ptr<const Optimizer>& optimizer, double eps) {
  Romc romc(benchmarks::model_ma2());
  romc.set_optimizer(optimizer);
  romc.solve_all(200, 21, 1);
  romc.estimate_regions(eps, true, false, 1);
  return Romc::compute_expectation(romc.sample(30, 21, 1), identity);
}

struct Training {
  std::string solutions;
  std::string regions;
  std::string samples;
  double seconds = 0.0;
};

Training train_ma2(std::size_t workers) {
  const auto start = std::chrono::steady_clock::now();
  Romc romc(benchmarks::model_ma2());
  GradientSolverOptions options;
  romc.set_optimizer(std::make_shared<GradientOptimizer>(options));
  romc.solve_all(200, 21, workers);
  romc.estimate_regions(0.05, true, true, workers);
  Training t;
  t.seconds = seconds_since(start);
  t.solutions = artifacts::solutions_to_json(romc, artifacts::Json::object()).dump(2);
  t.regions = artifacts::regions_to_json(romc, artifacts::Json::object()).dump(2);
  t.samples = artifacts::samples_csv(romc.sample(30, 21, workers));
  return t;
}

void regions_suite(Verdict& v) {
  const DistanceFn ellipse = [](const ParameterPoint& t) { return t[0] * t[0] + 4.0 * t[1] * t[1]; };
  const UniformPrior prior({{-2.0, 2.0}, {-2.0, 2.0}});
  const LineSearchSettings settings = default_line_search(prior);
  const OptimisationResult opt(pt({0.0, 0.0}), 0.0, Matrix{{2.0, 0.0}, {0.0, 8.0}});
  const BoundingBox box = build_box(ellipse, opt, 1.0, settings, opt.hess_appr);
  double worst = 0.0;
  for (Eigen::Index m = 0; m < 2; ++m) {
    const double expected = std::abs(box.rotation()(0, m)) > 0.5 ? 1.0 : 0.5;
    worst = std::max({worst, std::abs(box.upper()[m] - expected), std::abs(-box.lower()[m] - expected)});
  }
  v.detail << " ellipse extent error " << worst << " (resolution " << settings.resolution() << ")";
  v.require(worst <= settings.resolution(), "ellipse extents");

  // Every box of a real run: theta* strictly inside, orthonormal rotation, positive extents.
  Romc romc(benchmarks::model_ma2());
  romc.solve_problems(60, 4, false, 1);
  romc.estimate_regions(0.05, true, false, 1);
  std::size_t checked = 0;
  double defect = 0.0;
  bool inside = true;
  bool positive = true;
  for (const auto& rec : romc.regions()) {
    const auto& b = rec.region.box();
    const Vector z = b.to_local(romc.problems()[rec.index].report.result->x_min);
    inside = inside && (z.array() > b.lower().array()).all() && (z.array() < b.upper().array()).all();
    positive = positive && (b.upper().array() > 0.0).all() && (b.lower().array() < 0.0).all();
    const Eigen::Index d = b.rotation().rows();
    defect = std::max(defect, (b.rotation().transpose() * b.rotation() - Matrix::Identity(d, d)).norm());
    ++checked;
  }
  // Minimum-step rule: eps below f_min still yields a positive extent.
  const DistanceFn lifted = [](const ParameterPoint& t) { return t.squaredNorm() + 1.0; };
  const BoundingBox tiny = build_box(lifted, OptimisationResult(pt({0.0, 0.0}), 1.0, Matrix::Identity(2, 2)), 0.5,
                                     settings, Matrix::Identity(2, 2));
  positive = positive && (tiny.upper().array() > 0.0).all() && (tiny.lower().array() < 0.0).all();
  v.detail << "; " << checked << " MA2 boxes, max |U^T U - I| " << defect;
  v.require(checked > 0 && inside, "theta* strictly inside");
  v.require(defect < 1e-10, "orthonormal rotation");
  v.require(positive, "positive extents");
}

void weights_suite(Verdict& v) {
  Romc romc(benchmarks::model_ma2());
  romc.solve_problems(40, 6, false, 1);
  romc.estimate_regions(0.05, true, false, 1);
  const auto& posterior = romc.posterior();
  const InferenceResult result = romc.sample(40, 9, 1);
  std::size_t mismatched = 0;
  for (const auto& s : result.samples) {
    std::size_t r = 0;
    while (posterior.problem_indices()[r] != s.problem_index) {
      ++r;
    }
    const bool accepted = posterior.distances()[r](s.theta) <= posterior.eps();
    const double expected = accepted ? posterior.prior().density(s.theta) / posterior.regions()[r].density() : 0.0;
    mismatched += s.weight == expected ? 0 : 1;
  }
  v.detail << " " << result.samples.size() << " weights re-derived, " << mismatched << " mismatched";
  v.require(mismatched == 0, "w = indicator * p / q");

  std::mt19937_64 rng(12);
  std::size_t violations = 0;
  for (int i = 0; i < 300; ++i) {
    const ParameterPoint t = posterior.prior().sample(rng);
    double previous = 0.0;
    for (const double scale : {0.25, 0.5, 1.0, 2.0, 4.0}) {
      const double value = eval_unnorm_posterior(posterior.with_eps(posterior.eps() * scale), t);
      violations += value < previous ? 1 : 0;
      previous = value;
    }
  }
  v.detail << "; monotonicity violations " << violations;
  v.require(violations == 0, "monotone in eps");

  const PosteriorDensity density = romc.posterior_density(0.02, 1);
  double integral = 0.0;
  for (std::size_t i = 0; i < density.grid().size(); ++i) {
    integral += density(density.grid().midpoint(i)) * density.grid().cell_volume();
  }
  v.detail << "; integral of eval_posterior - 1 = " << integral - 1.0;
  v.require(std::abs(integral - 1.0) <= 1e-6, "self-normalization");
}

void optimization_suite(Verdict& v) {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  double worst_x = 0.0;
  for (Eigen::Index dim = 1; dim <= 3; ++dim) {
    const UniformPrior prior(std::vector<Interval>(static_cast<std::size_t>(dim), Interval{-5.0, 5.0}));
    for (int trial = 0; trial < 10; ++trial) {
      Matrix m(dim, dim);
      ParameterPoint c(dim);
      for (Eigen::Index i = 0; i < dim; ++i) {
        c[i] = 2.0 * u(rng);
        for (Eigen::Index j = 0; j < dim; ++j) {
          m(i, j) = u(rng);
        }
      }
      const Matrix a = m * m.transpose() + 0.5 * Matrix::Identity(dim, dim);
      const DistanceFn f = [a, c](const ParameterPoint& x) { return (x - c).dot(a * (x - c)); };
      const SolveReport rep = solve_gradient(f, prior, {}, static_cast<Seed>(trial));
      worst_x = rep.result ? std::max({worst_x, (rep.result->x_min - c).norm(), rep.result->f_min}) : INFINITY;
    }
  }
  v.detail << " quadratic max error " << worst_x;
  v.require(worst_x <= 1e-4, "quadratics to 1e-4");

  const DistanceFn g = [](const ParameterPoint& t) { return std::sin(t[0]) * std::exp(0.5 * t[1]) + t[0] * t[0] * t[1]; };
  double worst_rel = 0.0;
  for (int i = 0; i < 200; ++i) {
    const ParameterPoint t = pt({2.0 * u(rng), 2.0 * u(rng)});
    const Vector exact{{std::cos(t[0]) * std::exp(0.5 * t[1]) + 2.0 * t[0] * t[1],
                        0.5 * std::sin(t[0]) * std::exp(0.5 * t[1]) + t[0] * t[0]}};
    const Vector fd = finite_difference_gradient(g, t);
    worst_rel = std::max(worst_rel, (fd - exact).norm() / std::max(1.0, exact.norm()));
  }
  v.detail << "; FD gradient max relative error " << worst_rel;
  v.require(worst_rel <= 1e-4, "finite differences");

  std::vector<double> f_mins(301);
  std::vector<IndexedResult> results;
  std::exponential_distribution<double> e(2.0);
  for (std::size_t i = 0; i < f_mins.size(); ++i) {
    f_mins[i] = e(rng);
    results.emplace_back(i, OptimisationResult(pt({0.0}), f_mins[i], Matrix::Identity(1, 1)));
  }
  bool consistent = true;
  for (const double q : {0.01, 0.1, 0.25, 0.5, 0.75, 0.9, 1.0}) {
    const auto kept = filter_solutions(results, compute_eps(f_mins, q)).size();
    consistent = consistent && static_cast<double>(kept) >= q * static_cast<double>(f_mins.size()) &&
                 kept <= static_cast<std::size_t>(std::floor(q * static_cast<double>(f_mins.size()))) + 1;
  }
  v.require(consistent, "compute_eps quantile consistency");
}

void evaluation_suite(Verdict& v) {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  bool ess_ok = true;
  bool js_ok = true;
  double kl_self = 0.0;
  for (int t = 0; t < 200; ++t) {
    std::vector<double> p(25);
    std::vector<double> q(25);
    for (std::size_t i = 0; i < p.size(); ++i) {
      p[i] = u(rng);
      q[i] = u(rng);
    }
    const double ess = compute_ess(p);
    std::vector<double> scaled(p);
    for (auto& x : scaled) {
      x *= 1e5;
    }
    ess_ok = ess_ok && ess >= 1.0 && ess <= 25.0 && std::abs(compute_ess(scaled) - ess) <= 1e-12 * ess;
    const double pq = discrete_divergence(p, q, DivergenceKind::kJensenShannon);
    const double qp = discrete_divergence(q, p, DivergenceKind::kJensenShannon);
    js_ok = js_ok && std::abs(pq - qp) <= 1e-14 && pq >= 0.0 && pq <= std::log(2.0);
    kl_self = std::max(kl_self, std::abs(discrete_divergence(p, p, DivergenceKind::kKullbackLeibler)));
  }
  ess_ok = ess_ok && compute_ess(std::vector<double>{0.0, 3.0, 0.0}) == 1.0 &&
           std::abs(compute_ess(std::vector<double>(10, 0.3)) - 10.0) <= 1e-12;
  v.detail << " max |KL(p||p)| " << kl_self;
  v.require(ess_ok, "ESS bounds and scale invariance");
  v.require(js_ok, "JS symmetric in [0, log 2]");
  v.require(kl_self == 0.0, "KL(p||p) = 0");
}

void determinism_suite(Verdict& v) {
  const Training a = train_ma2(1);
  const Training b = train_ma2(1);
  const Training c = train_ma2(3);
  v.require(a.solutions == b.solutions && a.regions == b.regions && a.samples == b.samples, "repeat runs");
  v.require(a.solutions == c.solutions && a.regions == c.regions && a.samples == c.samples, "workers 1 vs 3");

  Romc one(benchmarks::model_1d());
  one.solve_problems(50, 8, false, 1);
  one.estimate_regions(0.75, true, true, 1);
  Romc four(benchmarks::model_1d());
  four.solve_problems(50, 8, false, 4);
  four.estimate_regions(0.75, true, true, 4);
  v.require(one.posterior_density(0.0, 1).grid_values() == four.posterior_density(0.0, 4).grid_values(),
            "posterior grid across workers");
  const auto r1 = benchmarks::rejection_abc(*benchmarks::model_ma2(), 3000, 0.05, 2, 1);
  const auto r4 = benchmarks::rejection_abc(*benchmarks::model_ma2(), 3000, 0.05, 2, 4);
  v.require(r1.distances == r4.distances, "rejection ABC across workers");
  v.detail << " solve, regions, local surrogates, sampling, posterior grid and rejection ABC compared";
}

}  // namespace

int main() {
  set_warnings_enabled(false);

  std::optional<Run1d> one_d;
  std::string one_d_error;
  try {
    one_d = run_1d();
  } catch (const std::exception& e) {
    one_d_error = e.what();
  }
  auto need_1d = [&]() -> const Run1d& {
    if (!one_d) {
      throw Error("1D run failed: " + one_d_error);
    }
    return *one_d;
  };

  guarded("C1", "1D JS divergence vs true posterior", [&](Verdict& v) {
    const Run1d& r = need_1d();
    v.detail << " JS = " << r.js << " (<= 0.05), runtime " << r.seconds << " s (< 120 s)";
    v.require(r.js <= 0.05, "JS");
    v.require(r.seconds < 120.0, "runtime");
  });
  guarded("C2", "1D posterior moments", [&](Verdict& v) {
    const Run1d& r = need_1d();
    v.detail << " E[theta] = " << r.mean << " (|.| <= 0.05), E[theta^2] = " << r.second << " (in [1.0, 1.25])";
    v.require(std::abs(r.mean) <= 0.05, "mean");
    v.require(r.second >= 1.0 && r.second <= 1.25, "second moment");
  });
  guarded("C3", "1D effective sample size", [&](Verdict& v) {
    const Run1d& r = need_1d();
    const double ratio = r.ess / static_cast<double>(r.n);
    v.detail << " ESS = " << r.ess << ", N = " << r.n << ", ESS/N = " << ratio << " (>= 0.7)";
    v.require(ratio >= 0.7, "ESS/N");
  });

  guarded("C4", "MA2 posterior means across methods", [](Verdict& v) {
    const auto start = std::chrono::steady_clock::now();
    const auto model = benchmarks::model_ma2();
    const auto rejection = benchmarks::rejection_abc(*model, 100000, 0.01, 21, 1);
    const double eps = rejection.threshold;
    const Vector rej = Romc::compute_expectation(rejection.samples, identity);
    const Vector grad = ma2_mean(std::make_shared<GradientOptimizer>(), eps);
    const Vector bo = ma2_mean(std::make_shared<BayesianOptimizer>(), eps);
    const double seconds = seconds_since(start);
    const Vector table{{0.5, 0.05}};
    double spread = 0.0;
    double offset = 0.0;
    for (const Vector* a : {&rej, &grad, &bo}) {
      offset = std::max(offset, (*a - table).cwiseAbs().maxCoeff());
      for (const Vector* b : {&rej, &grad, &bo}) {
        spread = std::max(spread, (*a - *b).cwiseAbs().maxCoeff());
      }
    }
    v.detail << " eps = " << eps << " (rejection 1% quantile); means gradient (" << grad[0] << ", " << grad[1]
             << "), BO (" << bo[0] << ", " << bo[1] << "), rejection (" << rej[0] << ", " << rej[1]
             << "); max pairwise gap " << spread << " (<= 0.1), max offset from (0.5, 0.05) " << offset
             << " (<= 0.15), runtime " << seconds << " s (< 600 s)";
    v.require(spread <= 0.1, "mutual agreement");
    v.require(offset <= 0.15, "reference means");
    v.require(seconds < 600.0, "runtime");
  });

  guarded("C5", "Parallel training", [](Verdict& v) {
    const std::size_t cores = available_cores();
    const std::size_t parallel = std::max<std::size_t>(cores, 4);
    const Training serial = train_ma2(1);
    const Training wide = train_ma2(parallel);
    const bool identical = serial.solutions == wide.solutions && serial.regions == wide.regions &&
                           serial.samples == wide.samples;
    const double speedup = serial.seconds / wide.seconds;
    v.detail << " artifacts with 1 and " << parallel << " workers " << (identical ? "byte-identical" : "DIFFER")
             << "; speedup " << speedup << " on " << cores << " core(s)";
    v.require(identical, "byte-identical artifacts");
    if (cores >= 4) {
      v.require(speedup >= 2.0, "speedup >= 2");
    } else {
      v.detail << " (speedup bound applies to >= 4 cores only; not assessable on this machine)";
    }
  });

  guarded("C6a", "Region properties", regions_suite);
  guarded("C6b", "Weight properties", weights_suite);
  guarded("C6c", "Optimization properties", optimization_suite);
  guarded("C6d", "Evaluation properties", evaluation_suite);
  guarded("C6e", "Determinism", determinism_suite);

  std::printf("%d criterion line(s) failed\n", failures);
  return failures == 0 ? 0 : 1;
}
