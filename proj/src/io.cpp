// Copyright 2026 The cdloc Authors
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

#include "cdloc/io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "cdloc/errors.hpp"

namespace cdloc::io {

namespace {

const Json &require(const Json &j, const char *key, const char *context) {
  if (!j.is_object() || !j.contains(key))
    throw DomainError(std::string(context) + ": missing field '" + key + "'");
  return j.at(key);
}

std::string status_name(const PointRecord &r) {
  return r.verdict ? to_string(r.verdict->status) : "Error";
}

} // namespace

Json to_json(Complex c) { return Json::array({c.real(), c.imag()}); }

Json to_json(const Matrix &m) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(to_json(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

Json to_json(const MultiIndex &i) { return Json(i.entries()); }

Json point_to_json(const Point &p) {
  Json out = Json::array();
  for (const Complex &c : p) out.push_back(to_json(c));
  return out;
}

Complex complex_from_json(const Json &j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return {j[0].get<double>(), j[1].get<double>()};
  throw DomainError("expected a complex number as [re, im], got " + j.dump());
}

Matrix matrix_from_json(const Json &j) {
  if (!j.is_array() || j.empty())
    throw DomainError("expected a matrix as a non-empty array of rows");
  const std::size_t rows = j.size();
  const std::size_t cols = j[0].is_array() ? j[0].size() : 0;
  Matrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    if (!j[r].is_array() || j[r].size() != cols)
      throw DomainError("matrix rows have unequal lengths");
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = complex_from_json(j[r][c]);
  }
  return m;
}

MultiIndex multiindex_from_json(const Json &j) {
  if (!j.is_array()) throw DomainError("expected a multi-index as an integer array");
  std::vector<unsigned> entries;
  for (const Json &e : j) {
    if (!e.is_number_integer() || e.get<long long>() < 0)
      throw DomainError("multi-index entries must be non-negative integers");
    entries.push_back(e.get<unsigned>());
  }
  return MultiIndex(std::move(entries));
}

Point point_from_json(const Json &j) {
  if (!j.is_array() || j.empty())
    throw DomainError("expected a point as a non-empty array of coordinates");
  Point p;
  for (const Json &c : j) p.push_back(complex_from_json(c));
  return p;
}

ModelPtr model_from_json(const Json &j) {
  const std::string type = require(j, "type", "model").get<std::string>();
  if (type == "szego") return szego(j.value("m", 1u));
  if (type == "bergman") return bergman(j.value("m", 1u));
  if (type == "polydisc")
    return product_polydisc(require(j, "weights", "polydisc").get<std::vector<double>>());
  if (type == "ball")
    return ball(require(j, "m", "ball").get<std::size_t>(),
                require(j, "weight", "ball").get<double>());
  if (type == "power_series") {
    const std::size_t m = require(j, "m", "power_series").get<std::size_t>();
    const std::size_t n = j.value("n", std::size_t(1));
    std::map<std::pair<MultiIndex, MultiIndex>, Matrix> terms;
    for (const Json &t : require(j, "terms", "power_series")) {
      const MultiIndex p = multiindex_from_json(require(t, "p", "power_series term"));
      const MultiIndex q = multiindex_from_json(require(t, "q", "power_series term"));
      const Json &a = require(t, "a", "power_series term");
      terms[{p, q}] = a.is_array() && !a.empty() && a[0].is_array() &&
                              !a[0].empty() && a[0][0].is_array()
                          ? matrix_from_json(a)
                          : Matrix::Constant(1, 1, complex_from_json(a));
    }
    return power_series(m, n, std::move(terms));
  }
  if (type == "direct_sum") {
    const Json &parts = require(j, "summands", "direct_sum");
    if (!parts.is_array() || parts.size() < 2)
      throw DomainError("direct_sum: need at least two summands");
    ModelPtr acc = model_from_json(parts[0]);
    for (std::size_t i = 1; i < parts.size(); ++i)
      acc = direct_sum(acc, model_from_json(parts[i]));
    return acc;
  }
  if (type == "transform") {
    ModelPtr inner = model_from_json(require(j, "inner", "transform"));
    if (j.contains("matrix")) return transform(inner, matrix_from_json(j.at("matrix")));
    const Json &jet = require(j, "jet", "transform");
    const Point base = jet.contains("basepoint")
                           ? point_from_json(jet.at("basepoint"))
                           : Point(inner->variables(), 0.0);
    unsigned order = 0;
    const Json &coeffs = require(jet, "coefficients", "transform jet");
    for (const Json &c : coeffs)
      order = std::max(order, multiindex_from_json(require(c, "index", "coefficient")).degree());
    HoloJet phi(inner->variables(), inner->rank(), order, base);
    for (const Json &c : coeffs) {
      const Matrix value = matrix_from_json(require(c, "matrix", "coefficient"));
      if (value.rows() != Eigen::Index(inner->rank()) || value.cols() != value.rows())
        throw ShapeError("transform: coefficient size differs from model rank");
      phi[multiindex_from_json(c.at("index"))] = value;
    }
    return transform(inner, std::move(phi));
  }
  if (type == "scale")
    return scale(model_from_json(require(j, "inner", "scale")),
                 require(j, "factor", "scale").get<double>());
  if (type == "catalog") {
    const std::string name = require(j, "name", "catalog").get<std::string>();
    for (auto &[key, model] : standard_catalog())
      if (key == name) return model;
    throw DomainError("unknown catalog model '" + name + "'");
  }
  throw DomainError("unknown model type '" + type + "'");
}

Json jet_to_json(const MatrixJet2 &jet) {
  Json entries = Json::array();
  const IndexOrdering &ord = jet.ordering();
  for (std::size_t pi = 0; pi < ord.size(); ++pi)
    for (std::size_t pj = 0; pj < ord.size(); ++pj)
      entries.push_back({{"I", to_json(ord[pi])},
                         {"J", to_json(ord[pj])},
                         {"matrix", to_json(jet.at(pi, pj))}});
  return {{"m", jet.variables()},
          {"n", jet.rank()},
          {"d", jet.order()},
          {"basepoint", point_to_json(jet.basepoint())},
          {"entries", std::move(entries)}};
}

Json invariants_to_json(const InvariantSet &invariants) {
  Json entries = Json::array();
  for (const auto &[i, j] : invariants.keys())
    entries.push_back({{"I", to_json(i)},
                       {"J", to_json(j)},
                       {"matrix", to_json(invariants.at(i, j))}});
  return {{"m", invariants.m},
          {"n", invariants.n},
          {"k", invariants.k},
          {"basepoint", point_to_json(invariants.basepoint)},
          {"entries", std::move(entries)}};
}

Json tuple_to_json(const MatrixTuple &t) {
  Json members = Json::array();
  for (const Matrix &m : t.members()) members.push_back(to_json(m));
  return {{"labels", t.labels()}, {"members", std::move(members)}};
}

MatrixTuple tuple_from_json(const Json &j) {
  const Json &members = j.is_object() ? require(j, "members", "tuple") : j;
  if (!members.is_array()) throw DomainError("tuple: expected an array of matrices");
  std::vector<Matrix> out;
  for (const Json &m : members) out.push_back(matrix_from_json(m));
  std::vector<std::string> labels;
  if (j.is_object() && j.contains("labels"))
    labels = j.at("labels").get<std::vector<std::string>>();
  return MatrixTuple(std::move(out), std::move(labels));
}

Json verdict_to_json(const EquivalenceVerdict &v) {
  Json out = {{"status", to_string(v.status)},
              {"guarantee", to_string(v.guarantee)},
              {"words_checked", v.words_checked},
              {"word_length_checked", v.word_length_checked},
              {"sufficiency_bound", v.sufficiency_bound},
              {"reason", v.reason}};
  if (v.certificate) {
    out["certificate"] = to_json(*v.certificate);
    out["residual"] = v.residual;
  }
  if (v.witness) {
    out["witness"] = {{"word", v.witness_text},
                      {"trace_a", to_json(v.witness_trace_a)},
                      {"trace_b", to_json(v.witness_trace_b)}};
  }
  return out;
}

Json record_to_json(const PointRecord &r) {
  Json out = {{"index", r.index}, {"z", point_to_json(r.z)}, {"k", r.k},
              {"status", status_name(r)}};
  if (r.verdict) out["verdict"] = verdict_to_json(*r.verdict);
  if (r.distance) out["distance"] = *r.distance;
  if (!r.error.empty()) out["error"] = r.error;
  if (r.tuple_a) out["tuple_a"] = tuple_to_json(*r.tuple_a);
  if (r.tuple_b) out["tuple_b"] = tuple_to_json(*r.tuple_b);
  if (r.seconds) out["seconds"] = *r.seconds;
  return out;
}

Json report_to_json(const ComparisonReport &report, const ComparisonRequest &request) {
  Json points = Json::array();
  for (const PointRecord &r : report.points) points.push_back(record_to_json(r));
  Json summary = {{"all_equivalent", report.all_equivalent},
                  {"scope", "sampled"},
                  {"points", report.points.size()},
                  {"equivalent", report.equivalent},
                  {"inequivalent", report.inequivalent},
                  {"inconclusive", report.inconclusive},
                  {"errors", report.errors}};
  summary["first_inequivalent"] =
      report.first_inequivalent ? Json(*report.first_inequivalent) : Json(nullptr);
  return {{"model_a", request.model_a ? request.model_a->describe() : ""},
          {"model_b", request.model_b ? request.model_b->describe() : ""},
          {"path", request.path == Path::Invariants ? "invariants" : "metric"},
          {"summary", std::move(summary)},
          {"results", std::move(points)}};
}

std::string report_summary(const ComparisonReport &report) {
  std::ostringstream os;
  os << std::setprecision(6);
  for (const PointRecord &r : report.points) {
    os << '#' << r.index << " z=(";
    for (std::size_t c = 0; c < r.z.size(); ++c)
      os << (c ? ", " : "") << r.z[c].real() << (r.z[c].imag() < 0 ? "-" : "+")
         << std::abs(r.z[c].imag()) << 'i';
    os << ") k=" << r.k << ' ' << status_name(r);
    if (r.verdict) {
      if (r.verdict->witness)
        os << " witness '" << r.verdict->witness_text << "' " << r.verdict->witness_trace_a
           << " vs " << r.verdict->witness_trace_b;
      if (r.verdict->certificate) os << " residual " << r.verdict->residual;
      if (r.verdict->status != Status::Inequivalent)
        os << " [" << to_string(r.verdict->guarantee) << ']';
    } else {
      os << ": " << r.error;
    }
    os << '\n';
  }
  os << "points " << report.points.size() << ": " << report.equivalent
     << " equivalent, " << report.inequivalent << " inequivalent, "
     << report.inconclusive << " inconclusive, " << report.errors << " errors\n";
  os << "all equivalent on sampled points: " << (report.all_equivalent ? "yes" : "no");
  if (report.first_inequivalent) os << " (first inequivalent: #" << *report.first_inequivalent << ')';
  os << '\n';
  return os.str();
}

std::string report_csv(const ComparisonReport &report, std::size_t m) {
  std::ostringstream os;
  os << std::setprecision(17);
  os << "index";
  for (std::size_t c = 1; c <= m; ++c) os << ",re_z" << c << ",im_z" << c;
  os << ",k,status,distance\n";
  for (const PointRecord &r : report.points) {
    os << r.index;
    for (std::size_t c = 0; c < m; ++c)
      os << ',' << (c < r.z.size() ? r.z[c].real() : NAN) << ','
         << (c < r.z.size() ? r.z[c].imag() : NAN);
    os << ',' << r.k << ',' << status_name(r) << ',';
    if (r.distance) os << *r.distance;
    else os << "nan";
    os << '\n';
  }
  return os.str();
}

Config config_from_json(const Json &j) {
  Config cfg;
  for (const auto &[name, desc] : require(j, "models", "config").items())
    cfg.models[name] = model_from_json(desc);
  if (j.contains("compare")) {
    const auto names = j.at("compare").get<std::vector<std::string>>();
    if (names.size() != 2) throw DomainError("config: 'compare' needs two model names");
    cfg.compare = {names[0], names[1]};
  }
  if (j.contains("points"))
    for (const Json &p : j.at("points")) cfg.points.push_back(point_from_json(p));
  if (j.contains("grid")) {
    GridSpec grid;
    for (const Json &axis : j.at("grid"))
      grid.axes.push_back({require(axis, "min", "grid axis").get<double>(),
                           require(axis, "max", "grid axis").get<double>(),
                           require(axis, "count", "grid axis").get<std::size_t>()});
    cfg.grid = std::move(grid);
  }
  cfg.options.k = j.value("k", 0u);
  cfg.options.specht.tolerance = j.value("tolerance", 1e-8);
  cfg.options.specht.certificate_tolerance = j.value("certificate_tolerance", 1e-6);
  cfg.options.specht.max_len = j.value("word_bound", std::size_t(0));
  cfg.options.specht.word_budget = j.value("word_budget", cfg.options.specht.word_budget);
  cfg.options.specht.seed = j.value("seed", std::uint64_t(0));
  const std::string path = j.value("path", std::string("invariants"));
  if (path == "invariants") cfg.path = Path::Invariants;
  else if (path == "metric") cfg.path = Path::Metric;
  else throw DomainError("config: path must be 'invariants' or 'metric'");
  return cfg;
}

Json read_json_file(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const Json::exception &e) {
    throw DomainError(path + ": " + e.what());
  }
}

} // namespace cdloc::io
