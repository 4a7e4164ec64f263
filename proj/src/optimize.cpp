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

#include <romc/optimize.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

namespace romc {

OptimisationResult::OptimisationResult(ParameterPoint x, double f, const Matrix& hess)
    : x_min(std::move(x)), f_min(f), hess_appr(0.5 * (hess + hess.transpose())) {}

namespace {

constexpr double kArmijo = 1e-4;
constexpr int kMaxBacktracks = 60;

struct BfgsRun {
  ParameterPoint x;
  double f = std::numeric_limits<double>::infinity();
  Matrix inverse_hessian;
  int iterations = 0;
};

/// Zeroes direction components that would leave the box from an active bound.
void project_direction(Vector& p, const ParameterPoint& x, const std::vector<Interval>& bounds) {
  for (Eigen::Index m = 0; m < p.size(); ++m) {
    const auto& b = bounds[static_cast<std::size_t>(m)];
    if ((x[m] <= b.low && p[m] < 0.0) || (x[m] >= b.high && p[m] > 0.0)) {
      p[m] = 0.0;
    }
  }
}

/// Largest step along p that keeps x + step * p inside the box.
double max_feasible_step(const Vector& p, const ParameterPoint& x, const std::vector<Interval>& bounds) {
  double alpha = std::numeric_limits<double>::infinity();
  for (Eigen::Index m = 0; m < p.size(); ++m) {
    const auto& b = bounds[static_cast<std::size_t>(m)];
    if (p[m] > 0.0) {
      alpha = std::min(alpha, (b.high - x[m]) / p[m]);
    } else if (p[m] < 0.0) {
      alpha = std::min(alpha, (b.low - x[m]) / p[m]);
    }
  }
  return alpha;
}

BfgsRun run_bfgs(const DistanceFn& objective, const std::function<Vector(const ParameterPoint&)>& gradient,
                 const Prior& prior, ParameterPoint x, const GradientSolverOptions& options) {
  const auto& bounds = prior.bounds();
  const Eigen::Index dim = x.size();
  BfgsRun run;
  run.inverse_hessian = Matrix::Identity(dim, dim);

  double f = objective(x);
  if (!std::isfinite(f)) {
    throw NumericalFailure("non-finite objective at starting point", x);
  }
  Vector g = gradient(x);
  bool scaled = false;

  for (run.iterations = 0; run.iterations < options.max_iters; ++run.iterations) {
    Vector pg = -g;
    project_direction(pg, x, bounds);
    if (pg.lpNorm<Eigen::Infinity>() <= options.gradient_tolerance) {
      break;
    }

    Vector p = -run.inverse_hessian * g;
    project_direction(p, x, bounds);
    if (g.dot(p) >= 0.0) {
      run.inverse_hessian.setIdentity();
      p = pg;
    }
    const double slope = g.dot(p);
    if (slope >= 0.0) {
      break;
    }

    const double alpha_max = max_feasible_step(p, x, bounds);
    double alpha = std::min(1.0, alpha_max);
    ParameterPoint x_new;
    double f_new = std::numeric_limits<double>::quiet_NaN();
    bool accepted = false;
    for (int k = 0; k < kMaxBacktracks; ++k) {
      x_new = prior.clip(x + alpha * p);
      f_new = objective(x_new);
      if (std::isfinite(f_new) && f_new <= f + kArmijo * alpha * slope) {
        accepted = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!accepted) {
      break;
    }

    const Vector g_new = gradient(x_new);
    const Vector s = x_new - x;
    const Vector y = g_new - g;
    const double sy = s.dot(y);
    if (sy > 1e-12 * s.norm() * y.norm() && sy > 0.0) {
      if (!scaled) {
        run.inverse_hessian *= sy / y.squaredNorm();
        scaled = true;
      }
      const double rho = 1.0 / sy;
      const Matrix id = Matrix::Identity(dim, dim);
      const Matrix left = id - rho * s * y.transpose();
      run.inverse_hessian = left * run.inverse_hessian * left.transpose() + rho * s * s.transpose();
    }

    const double decrease = f - f_new;
    x = std::move(x_new);
    g = g_new;
    f = f_new;
    if (decrease <= options.function_tolerance * std::max({1.0, std::abs(f), std::abs(f + decrease)})) {
      ++run.iterations;
      break;
    }
  }
  run.x = std::move(x);
  run.f = f;
  return run;
}

Matrix invert_spd(const Matrix& m) {
  Eigen::LDLT<Matrix> ldlt(0.5 * (m + m.transpose()));
  if (ldlt.info() != Eigen::Success) {
    return Matrix::Identity(m.rows(), m.cols());
  }
  return ldlt.solve(Matrix::Identity(m.rows(), m.cols()));
}

std::vector<ParameterPoint> latin_hypercube(const Prior& prior, int n, std::mt19937_64& rng) {
  const auto& bounds = prior.bounds();
  const std::size_t dim = bounds.size();
  std::vector<ParameterPoint> points(static_cast<std::size_t>(n), ParameterPoint(static_cast<Eigen::Index>(dim)));
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<int> strata(static_cast<std::size_t>(n));
  for (std::size_t m = 0; m < dim; ++m) {
    std::iota(strata.begin(), strata.end(), 0);
    std::shuffle(strata.begin(), strata.end(), rng);
    for (int i = 0; i < n; ++i) {
      const double u = (strata[static_cast<std::size_t>(i)] + unit(rng)) / n;
      points[static_cast<std::size_t>(i)][static_cast<Eigen::Index>(m)] =
          bounds[m].low + u * bounds[m].width();
    }
  }
  return points;
}

double standard_normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

double standard_normal_pdf(double z) { return std::exp(-0.5 * z * z) / std::sqrt(2.0 * M_PI); }

}  // namespace

SolveReport solve_gradient(const DistanceFn& objective, const Prior& prior, const GradientSolverOptions& options,
                           Seed seed) {
  if (options.restarts < 1 || options.max_iters < 1) {
    throw InvalidArgument("solve_gradient: restarts and max_iters must be positive");
  }
  for (const auto& b : prior.bounds()) {
    if (!std::isfinite(b.low) || !std::isfinite(b.high)) {
      throw InvalidArgument("solve_gradient: prior bounds must be finite");
    }
  }

  SolveReport report;
  const DistanceFn counted = [&](const ParameterPoint& theta) {
    ++report.evaluations;
    return objective(theta);
  };
  const std::function<Vector(const ParameterPoint&)> gradient =
      options.gradient ? options.gradient : [&](const ParameterPoint& theta) {
        return finite_difference_gradient(counted, theta, options.fd_step);
      };

  std::mt19937_64 rng(seed);
  std::optional<BfgsRun> best;
  for (int r = 0; r < options.restarts; ++r) {
    const ParameterPoint start = prior.clip(prior.sample(rng));
    try {
      BfgsRun run = run_bfgs(counted, gradient, prior, start, options);
      report.iterations += run.iterations;
      if (std::isfinite(run.f) && (!best || run.f < best->f)) {
        best = std::move(run);
      }
    } catch (const NumericalFailure& e) {
      report.failure = e.what();
    }
  }
  if (!best) {
    if (report.failure.empty()) {
      report.failure = "all restarts diverged";
    }
    return report;
  }
  report.failure.clear();
  report.result.emplace(best->x, best->f, invert_spd(best->inverse_hessian));
  return report;
}

double expected_improvement(double mean, double variance, double best) {
  const double sigma = std::sqrt(std::max(variance, 0.0));
  const double gain = best - mean;
  if (sigma < 1e-12) {
    return std::max(gain, 0.0);
  }
  const double z = gain / sigma;
  return gain * standard_normal_cdf(z) + sigma * standard_normal_pdf(z);
}

Matrix finite_difference_hessian(const DistanceFn& f, const ParameterPoint& x, const Vector& steps) {
  const Eigen::Index dim = x.size();
  Matrix hess(dim, dim);
  const double f0 = f(x);
  ParameterPoint probe = x;
  for (Eigen::Index a = 0; a < dim; ++a) {
    const double ha = steps[a];
    probe[a] = x[a] + ha;
    const double fp = f(probe);
    probe[a] = x[a] - ha;
    const double fm = f(probe);
    probe[a] = x[a];
    hess(a, a) = (fp - 2.0 * f0 + fm) / (ha * ha);
    for (Eigen::Index b = a + 1; b < dim; ++b) {
      const double hb = steps[b];
      auto eval = [&](double sa, double sb) {
        probe[a] = x[a] + sa * ha;
        probe[b] = x[b] + sb * hb;
        const double v = f(probe);
        probe[a] = x[a];
        probe[b] = x[b];
        return v;
      };
      const double v = (eval(1, 1) - eval(1, -1) - eval(-1, 1) + eval(-1, -1)) / (4.0 * ha * hb);
      hess(a, b) = v;
      hess(b, a) = v;
    }
  }
  if (!hess.allFinite()) {
    throw NumericalFailure("non-finite finite-difference Hessian", x);
  }
  return hess;
}

BayesianSolveReport solve_bayesian(const DistanceFn& objective, const Prior& prior,
                                   const BayesianSolverOptions& options, Seed seed) {
  if (options.init_points < 2 || options.budget <= options.init_points || options.candidates < 1) {
    throw InvalidArgument("solve_bayesian: requires budget > init_points >= 2 and candidates >= 1");
  }
  const auto& bounds = prior.bounds();
  const auto dim = static_cast<Eigen::Index>(bounds.size());
  std::mt19937_64 rng(seed);

  BayesianSolveReport out;
  SolveReport& report = out.report;
  Matrix inputs(options.budget, dim);
  Vector values(options.budget);
  Eigen::Index n = 0;

  auto evaluate = [&](const ParameterPoint& theta) {
    const double v = objective(theta);
    ++report.evaluations;
    if (!std::isfinite(v)) {
      throw NumericalFailure("non-finite objective during Bayesian optimization", theta);
    }
    inputs.row(n) = theta.transpose();
    values[n] = v;
    ++n;
  };

  try {
    for (const auto& theta : latin_hypercube(prior, options.init_points, rng)) {
      evaluate(theta);
    }
    Matrix candidates(options.candidates, dim);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    while (n < options.budget) {
      const GaussianProcess gp = GaussianProcess::fit(inputs.topRows(n), values.head(n));
      const double best = values.head(n).minCoeff();
      for (Eigen::Index c = 0; c < candidates.rows(); ++c) {
        for (Eigen::Index m = 0; m < dim; ++m) {
          const auto& b = bounds[static_cast<std::size_t>(m)];
          candidates(c, m) = b.low + unit(rng) * b.width();
        }
      }
      Vector mean;
      Vector variance;
      gp.predict_batch(candidates, mean, variance);
      Eigen::Index pick = 0;
      double best_ei = -1.0;
      for (Eigen::Index c = 0; c < candidates.rows(); ++c) {
        const double ei = expected_improvement(mean[c], variance[c], best);
        if (ei > best_ei) {
          best_ei = ei;
          pick = c;
        }
      }
      evaluate(candidates.row(pick).transpose());
      ++report.iterations;
    }

    GaussianProcess gp = GaussianProcess::fit(inputs, values);
    Eigen::Index incumbent = 0;
    values.minCoeff(&incumbent);
    const ParameterPoint x_min = inputs.row(incumbent).transpose();
    const DistanceFn gp_mean = [&gp](const ParameterPoint& theta) { return gp.predict_mean(theta); };
    const Vector steps = 1e-3 * gp.hyperparameters().lengthscales;
    const Matrix hess = finite_difference_hessian(gp_mean, x_min, steps);
    report.result.emplace(x_min, gp.predict_mean(x_min), hess);
    out.surrogate.emplace(std::move(gp));
  } catch (const NumericalFailure& e) {
    report.result.reset();
    report.failure = e.what();
  }
  return out;
}

std::vector<std::size_t> filter_solutions(std::span<const IndexedResult> results, double eps) {
  if (!(eps > 0.0)) {
    throw InvalidArgument("filter_solutions: eps must be positive");
  }
  std::vector<std::size_t> accepted;
  for (const auto& [index, result] : results) {
    if (result && result->f_min <= eps) {
      accepted.push_back(index);
    }
  }
  std::sort(accepted.begin(), accepted.end());
  return accepted;
}

double compute_eps(std::span<const double> f_mins, double quantile) {
  if (f_mins.empty()) {
    throw InvalidState("compute_eps: no solved problems");
  }
  if (!(quantile >= 0.0 && quantile <= 1.0)) {
    throw InvalidArgument("compute_eps: quantile must lie in [0, 1]");
  }
  std::vector<double> sorted(f_mins.begin(), f_mins.end());
  std::sort(sorted.begin(), sorted.end());
  const auto n = sorted.size();
  const auto index = std::min(static_cast<std::size_t>(std::floor(quantile * static_cast<double>(n))), n - 1);
  return sorted[index];
}

std::vector<HistogramBin> distance_histogram(std::span<const double> values, std::size_t bins) {
  if (values.empty()) {
    throw InvalidState("distance_histogram: no distances");
  }
  if (bins == 0) {
    throw InvalidArgument("distance_histogram: bins must be positive");
  }
  const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
  const double lo = *lo_it;
  double hi = *hi_it;
  if (hi <= lo) {
    hi = lo + std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(lo));
  }
  const double width = (hi - lo) / static_cast<double>(bins);
  std::vector<HistogramBin> out(bins);
  for (std::size_t b = 0; b < bins; ++b) {
    out[b].left = lo + static_cast<double>(b) * width;
    out[b].right = b + 1 == bins ? hi : lo + static_cast<double>(b + 1) * width;
    out[b].count = 0;
  }
  for (const double v : values) {
    auto b = static_cast<std::size_t>(std::floor((v - lo) / width));
    out[std::min(b, bins - 1)].count += 1;
  }
  return out;
}

}  // namespace romc
