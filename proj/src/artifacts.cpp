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

#include <romc/artifacts.hpp>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <limits>
#include <sstream>

namespace romc::artifacts {

namespace {

double number(const Json& j) {
  return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : j.get<double>();
}

void check_schema(const Json& doc, const std::string& kind) {
  if (!doc.is_object() || doc.value("schema_version", -1) != kSchemaVersion || doc.value("kind", "") != kind) {
    throw InvalidArgument("artifact is not a " + kind + " record of schema version " +
                          std::to_string(kSchemaVersion));
  }
}

Seed master_seed_of(const Json& doc) { return doc.at("provenance").at("master_seed").get<Seed>(); }

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

Json vector_to_json(const Vector& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    out.push_back(v[i]);
  }
  return out;
}

Vector vector_from_json(const Json& j) {
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    v[static_cast<Eigen::Index>(i)] = number(j[i]);
  }
  return v;
}

Json matrix_to_json(const Matrix& m) {
  Json out = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    out.push_back(vector_to_json(m.row(r).transpose()));
  }
  return out;
}

Matrix matrix_from_json(const Json& j) {
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = rows == 0 ? Eigen::Index{0} : static_cast<Eigen::Index>(j[0].size());
  Matrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    if (static_cast<Eigen::Index>(j[static_cast<std::size_t>(r)].size()) != cols) {
      throw InvalidArgument("matrix rows have different lengths");
    }
    m.row(r) = vector_from_json(j[static_cast<std::size_t>(r)]).transpose();
  }
  return m;
}

Json gp_to_json(const GaussianProcess& gp) {
  const auto& h = gp.hyperparameters();
  return Json{{"inputs", matrix_to_json(gp.inputs())},
              {"values", vector_to_json(gp.values())},
              {"lengthscales", vector_to_json(h.lengthscales)},
              {"kernel_variance", h.kernel_variance},
              {"noise_variance", h.noise_variance},
              {"mean", h.mean}};
}

GaussianProcess gp_from_json(const Json& j) {
  GaussianProcessHyperparameters h;
  h.lengthscales = vector_from_json(j.at("lengthscales"));
  h.kernel_variance = j.at("kernel_variance").get<double>();
  h.noise_variance = j.at("noise_variance").get<double>();
  h.mean = j.at("mean").get<double>();
  return GaussianProcess(matrix_from_json(j.at("inputs")), vector_from_json(j.at("values")), std::move(h));
}

Json make_provenance(const Json& config, Seed master_seed) {
  return Json{{"config", config}, {"master_seed", master_seed}};
}

Json solutions_to_json(const Romc& romc, const Json& provenance) {
  Json problems = Json::array();
  for (const auto& p : romc.problems()) {
    Json rec{{"index", p.index}, {"seed", p.seed}, {"status", p.solved() ? "solved" : "failed"}};
    if (p.solved()) {
      const auto& r = *p.report.result;
      rec["x_min"] = vector_to_json(r.x_min);
      rec["f_min"] = r.f_min;
      rec["hess_appr"] = matrix_to_json(r.hess_appr);
    } else {
      rec["failure"] = p.report.failure;
    }
    rec["iterations"] = p.report.iterations;
    rec["evaluations"] = p.report.evaluations;
    if (p.surrogate) {
      rec["gp"] = gp_to_json(*p.surrogate);
    }
    problems.push_back(std::move(rec));
  }
  return Json{{"schema_version", kSchemaVersion},
              {"kind", "solutions"},
              {"provenance", provenance},
              {"model", romc.model().name},
              {"n1", romc.problems().size()},
              {"solved", romc.solved_count()},
              {"problems", std::move(problems)}};
}

void restore_solutions(Romc& romc, const Json& doc) {
  check_schema(doc, "solutions");
  if (doc.value("model", "") != romc.model().name) {
    throw InvalidArgument("solutions artifact was produced for model '" + doc.value("model", "") + "'");
  }
  std::vector<ProblemRecord> problems;
  for (const auto& rec : doc.at("problems")) {
    ProblemRecord p;
    p.index = rec.at("index").get<std::size_t>();
    p.seed = rec.at("seed").get<Seed>();
    p.report.iterations = rec.value("iterations", 0);
    p.report.evaluations = rec.value("evaluations", 0);
    if (rec.at("status") == "solved") {
      p.report.result.emplace(vector_from_json(rec.at("x_min")), number(rec.at("f_min")),
                              matrix_from_json(rec.at("hess_appr")));
    } else {
      p.report.failure = rec.value("failure", "");
    }
    if (rec.contains("gp")) {
      p.surrogate.emplace(gp_from_json(rec.at("gp")));
    }
    problems.push_back(std::move(p));
  }
  romc.restore_problems(master_seed_of(doc), std::move(problems));
}

Json regions_to_json(const Romc& romc, const Json& provenance) {
  Json regions = Json::array();
  for (const auto& r : romc.regions()) {
    const auto& box = r.region.box();
    Json rec{{"index", r.index},
             {"seed", romc.objective(r.index).seed()},
             {"center", vector_to_json(box.center())},
             {"rotation", matrix_to_json(box.rotation())},
             {"lower", vector_to_json(box.lower())},
             {"upper", vector_to_json(box.upper())},
             {"volume", box.volume()},
             {"eps", romc.eps()}};
    if (r.local) {
      if (const auto* q = dynamic_cast<const QuadraticSurrogate*>(r.local.get())) {
        Json upper = Json::array();
        for (Eigen::Index a = 0; a < q->quadratic().rows(); ++a) {
          for (Eigen::Index b = a; b < q->quadratic().cols(); ++b) {
            upper.push_back(q->quadratic()(a, b));
          }
        }
        rec["surrogate"] = Json{{"kind", "quadratic"},
                                {"origin", vector_to_json(q->origin())},
                                {"constant", q->constant()},
                                {"linear", vector_to_json(q->linear())},
                                {"quadratic_upper", std::move(upper)},
                                {"training_size", q->training_size()}};
      } else {
        warn("region " + std::to_string(r.index) + ": custom surrogate is not serializable and was skipped");
      }
    }
    regions.push_back(std::move(rec));
  }
  return Json{{"schema_version", kSchemaVersion},
              {"kind", "regions"},
              {"provenance", provenance},
              {"model", romc.model().name},
              {"eps", romc.eps()},
              {"use_surrogate", romc.use_surrogate()},
              {"failed", romc.failed_regions()},
              {"regions", std::move(regions)}};
}

void restore_regions(Romc& romc, const Json& doc) {
  check_schema(doc, "regions");
  std::vector<RegionRecord> regions;
  for (const auto& rec : doc.at("regions")) {
    RegionRecord r{rec.at("index").get<std::size_t>(),
                   ProposalRegion(BoundingBox(matrix_from_json(rec.at("rotation")), vector_from_json(rec.at("center")),
                                              vector_from_json(rec.at("lower")), vector_from_json(rec.at("upper")))),
                   nullptr};
    if (rec.contains("surrogate") && rec.at("surrogate").value("kind", "") == "quadratic") {
      const auto& s = rec.at("surrogate");
      const Vector origin = vector_from_json(s.at("origin"));
      const Eigen::Index dim = origin.size();
      const Vector upper = vector_from_json(s.at("quadratic_upper"));
      if (upper.size() != dim * (dim + 1) / 2) {
        throw InvalidArgument("quadratic surrogate: wrong number of coefficients");
      }
      Matrix a(dim, dim);
      Eigen::Index k = 0;
      for (Eigen::Index i = 0; i < dim; ++i) {
        for (Eigen::Index j = i; j < dim; ++j) {
          a(i, j) = upper[k];
          a(j, i) = upper[k];
          ++k;
        }
      }
      r.local = std::make_shared<QuadraticSurrogate>(origin, s.at("constant").get<double>(),
                                                     vector_from_json(s.at("linear")), std::move(a),
                                                     s.at("training_size").get<std::size_t>(), r.index);
    }
    regions.push_back(std::move(r));
  }
  romc.restore_regions(doc.at("eps").get<double>(), doc.at("use_surrogate").get<bool>(), std::move(regions));
}

Json summary_to_json(const SampleSummary& summary) {
  Json params = Json::array();
  for (std::size_t m = 0; m < summary.parameters.size(); ++m) {
    const auto& p = summary.parameters[m];
    params.push_back(Json{{"name", "theta_" + std::to_string(m + 1)},
                          {"mean", p.mean},
                          {"sd", p.sd},
                          {"q2.5", p.q025},
                          {"q97.5", p.q975}});
  }
  return Json{{"n_samples", summary.n_samples}, {"n_nonzero", summary.n_nonzero}, {"parameters", std::move(params)}};
}

std::string telemetry_csv(const Romc& romc) {
  std::ostringstream out;
  out << "problem_index,seed,status,f_min,iterations,evaluations,wall_seconds\n";
  for (const auto& p : romc.problems()) {
    out << p.index << ',' << p.seed << ',' << (p.solved() ? "solved" : "failed") << ','
        << (p.solved() ? format_double(p.report.result->f_min) : "") << ',' << p.report.iterations << ','
        << p.report.evaluations << ',' << format_double(p.wall_seconds) << '\n';
  }
  return out.str();
}

std::string histogram_csv(const std::vector<HistogramBin>& bins) {
  std::ostringstream out;
  out << "bin_left,bin_right,count\n";
  for (const auto& b : bins) {
    out << format_double(b.left) << ',' << format_double(b.right) << ',' << b.count << '\n';
  }
  return out.str();
}

std::string samples_csv(const InferenceResult& result) {
  std::ostringstream out;
  out << "problem_index,draw_index";
  const Eigen::Index dim = result.samples.empty() ? 0 : result.samples.front().theta.size();
  for (Eigen::Index m = 0; m < dim; ++m) {
    out << ",theta_" << m + 1;
  }
  out << ",weight\n";
  for (const auto& s : result.samples) {
    out << s.problem_index << ',' << s.draw_index;
    for (Eigen::Index m = 0; m < dim; ++m) {
      out << ',' << format_double(s.theta[m]);
    }
    out << ',' << format_double(s.weight) << '\n';
  }
  return out.str();
}

InferenceResult samples_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line.rfind("problem_index,draw_index,", 0) != 0) {
    throw InvalidArgument("samples CSV: missing header");
  }
  const auto columns = static_cast<std::size_t>(std::count(line.begin(), line.end(), ',')) + 1;
  if (columns < 4) {
    throw InvalidArgument("samples CSV: expected at least one theta column");
  }
  const auto dim = static_cast<Eigen::Index>(columns - 3);
  InferenceResult result;
  std::vector<std::size_t> problems;
  while (std::getline(in, line)) {
    if (line.empty()) {
      continue;
    }
    std::vector<double> fields;
    const char* p = line.data();
    const char* end = line.data() + line.size();
    while (p <= end) {
      const char* comma = std::find(p, end, ',');
      double v = 0.0;
      const auto res = std::from_chars(p, comma, v);
      if (res.ec != std::errc() || res.ptr != comma) {
        throw InvalidArgument("samples CSV: malformed number in '" + line + "'");
      }
      fields.push_back(v);
      p = comma + 1;
    }
    if (fields.size() != columns) {
      throw InvalidArgument("samples CSV: wrong column count in '" + line + "'");
    }
    WeightedSample s{ParameterPoint(dim), fields.back(), static_cast<std::size_t>(fields[0]),
                     static_cast<std::size_t>(fields[1])};
    for (Eigen::Index m = 0; m < dim; ++m) {
      s.theta[m] = fields[static_cast<std::size_t>(m) + 2];
    }
    if (problems.empty() || problems.back() != s.problem_index) {
      problems.push_back(s.problem_index);
    }
    result.samples.push_back(std::move(s));
  }
  result.n1_accepted = problems.size();
  result.n2 = problems.empty() ? 0 : result.samples.size() / problems.size();
  return result;
}

std::string region_plot_csv(const RegionPlotData& data) {
  std::ostringstream out;
  const std::size_t dim = data.axes.size();
  out << "kind";
  for (std::size_t m = 0; m < dim; ++m) {
    out << ",theta_" << m + 1;
  }
  out << ",distance\n";
  for (const auto& c : data.corners) {
    out << "corner";
    for (Eigen::Index m = 0; m < c.size(); ++m) {
      out << ',' << format_double(c[m]);
    }
    out << ",\n";
  }
  if (dim == 1) {
    for (Eigen::Index i = 0; i < data.axes[0].size(); ++i) {
      out << "grid," << format_double(data.axes[0][i]) << ','
          << format_double(data.distances[static_cast<std::size_t>(i)]) << '\n';
    }
  } else if (dim == 2) {
    const Eigen::Index n = data.axes[1].size();
    for (Eigen::Index i = 0; i < data.axes[0].size(); ++i) {
      for (Eigen::Index j = 0; j < n; ++j) {
        out << "grid," << format_double(data.axes[0][i]) << ',' << format_double(data.axes[1][j]) << ','
            << format_double(data.distances[static_cast<std::size_t>(i * n + j)]) << '\n';
      }
    }
  }
  return out.str();
}

Json read_json(const std::filesystem::path& path) {
  const std::string text = read_text(path);
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument("malformed JSON in " + path.string() + ": " + e.what());
  }
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw InvalidArgument("cannot read " + path.string());
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path());
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw InvalidArgument("cannot write " + path.string());
  }
  out << text;
}

void write_json(const std::filesystem::path& path, const Json& doc) { write_text(path, doc.dump(2) + "\n"); }

}  // namespace romc::artifacts
