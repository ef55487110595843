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

// cdloc: localization invariants and unitary equivalence of Cowen-Douglas
// models.
//
// Exit codes for compare/sweep/specht: 0 equivalent (at every sampled
// point), 1 inequivalent, 2 inconclusive, 3 or more on errors.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "cdloc/compare.hpp"
#include "cdloc/errors.hpp"
#include "cdloc/io.hpp"

namespace {

using namespace cdloc;
using io::Json;

constexpr int kExitError = 3;
constexpr int kExitUsage = 4;

int exit_code(Status s) {
  switch (s) {
  case Status::Equivalent: return 0;
  case Status::Inequivalent: return 1;
  case Status::Inconclusive: return 2;
  }
  return kExitError;
}

int exit_code(const ComparisonReport &report) {
  if (report.errors) return kExitError;
  if (report.inequivalent) return 1;
  if (report.inconclusive) return 2;
  return 0;
}

void write_file(const std::string &path, const std::string &text) {
  if (path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw DomainError("cannot write " + path);
  out << text;
}

struct ModelSource {
  std::string config;
  std::string model;

  // "catalog:<name>" or a model name declared in the config file.
  ModelPtr resolve() const {
    const std::string prefix = "catalog:";
    if (model.rfind(prefix, 0) == 0)
      return io::model_from_json({{"type", "catalog"}, {"name", model.substr(prefix.size())}});
    if (config.empty()) throw DomainError("--model needs --config or a catalog: prefix");
    const io::Config cfg = io::config_from_json(io::read_json_file(config));
    auto it = cfg.models.find(model);
    if (it == cfg.models.end()) throw DomainError("model '" + model + "' not in " + config);
    return it->second;
  }
};

Point parse_point(const std::string &text) {
  try {
    return io::point_from_json(Json::parse(text));
  } catch (const Json::exception &e) {
    throw DomainError("--point must be a JSON array of [re, im] pairs: " +
                      std::string(e.what()));
  }
}

ComparisonRequest request_from(const io::Config &cfg) {
  ComparisonRequest request;
  for (const std::string &name : {cfg.compare.first, cfg.compare.second})
    if (!cfg.models.count(name))
      throw DomainError("config does not declare model '" + name + "'");
  request.model_a = cfg.models.at(cfg.compare.first);
  request.model_b = cfg.models.at(cfg.compare.second);
  request.points = cfg.points;
  request.grid = cfg.grid;
  request.options = cfg.options;
  request.path = cfg.path;
  return request;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Localization invariants and unitary equivalence of Cowen-Douglas models"};
  app.require_subcommand(1);

  // jet
  ModelSource jet_source;
  std::string jet_point;
  unsigned jet_order = 1;
  bool jet_numeric = false, jet_normalize = false;
  std::optional<double> jet_radius;
  std::optional<std::size_t> jet_nodes;
  auto *jet_cmd = app.add_subcommand("jet", "Dump a model's kernel jet at a point as JSON");
  jet_cmd->add_option("--config", jet_source.config, "Config file declaring models");
  jet_cmd->add_option("--model", jet_source.model, "Model name or catalog:<name>")->required();
  jet_cmd->add_option("--point", jet_point, "Basepoint, e.g. [[0.5,0]]")->required();
  jet_cmd->add_option("--order", jet_order, "Jet order d");
  jet_cmd->add_flag("--numeric", jet_numeric, "Use Cauchy quadrature");
  jet_cmd->add_option("--radius", jet_radius, "Quadrature radius");
  jet_cmd->add_option("--nodes", jet_nodes, "Quadrature nodes per circle");
  jet_cmd->add_flag("--normalize", jet_normalize, "Normalize the frame first");

  // invariants
  ModelSource inv_source;
  std::string inv_point;
  unsigned inv_k = 0;
  bool inv_oracle = false;
  auto *inv_cmd = app.add_subcommand("invariants", "Dump the invariant set K_z^{IJ} as JSON");
  inv_cmd->add_option("--config", inv_source.config, "Config file declaring models");
  inv_cmd->add_option("--model", inv_source.model, "Model name or catalog:<name>")->required();
  inv_cmd->add_option("--point", inv_point, "Basepoint, e.g. [[0.5,0]]")->required();
  inv_cmd->add_option("--k", inv_k, "Localization order (default n+1)");
  inv_cmd->add_flag("--oracle", inv_oracle, "Use the explicit operator-matrix route");

  // compare
  std::string cmp_config, cmp_point, cmp_json;
  unsigned cmp_k = 0;
  bool cmp_metric = false;
  auto *cmp_cmd = app.add_subcommand("compare", "Compare two models at one point");
  cmp_cmd->add_option("--config", cmp_config, "Config file")->required();
  cmp_cmd->add_option("--point", cmp_point, "Point (default: first point in config)");
  cmp_cmd->add_option("--k", cmp_k, "Localization order (overrides config)");
  cmp_cmd->add_flag("--metric", cmp_metric, "Compare normalized metric derivatives instead");
  cmp_cmd->add_option("--json", cmp_json, "Write the JSON report here ('-' for stdout)");

  // sweep
  std::string sw_config, sw_json, sw_csv;
  unsigned sw_threads = 0;
  bool sw_timing = false, sw_metric = false, sw_dump = false;
  auto *sw_cmd = app.add_subcommand("sweep", "Compare two models over the config's points and grid");
  sw_cmd->add_option("--config", sw_config, "Config file")->required();
  sw_cmd->add_option("--json", sw_json, "Write the JSON report here ('-' for stdout)");
  sw_cmd->add_option("--csv", sw_csv, "Write per-point distances as CSV");
  sw_cmd->add_option("--threads", sw_threads, "Worker threads (default: hardware)");
  sw_cmd->add_flag("--timing", sw_timing, "Record per-point wall time");
  sw_cmd->add_flag("--metric", sw_metric, "Compare normalized metric derivatives instead");
  sw_cmd->add_flag("--dump-invariants", sw_dump, "Include compared tuples in the JSON report");

  // specht
  std::string sp_input;
  SpechtOptions sp_options;
  auto *sp_cmd = app.add_subcommand("specht", "Joint unitary equivalence of two matrix tuples");
  sp_cmd->add_option("--input", sp_input, "JSON file with tuples 'a' and 'b'")->required();
  sp_cmd->add_option("--max-len", sp_options.max_len, "Longest trace word (default 2p^2)");
  sp_cmd->add_option("--tol", sp_options.tolerance, "Trace tolerance");
  sp_cmd->add_option("--cert-tol", sp_options.certificate_tolerance, "Certificate residual tolerance");
  sp_cmd->add_option("--seed", sp_options.seed, "Random seed");

  auto *cat_cmd = app.add_subcommand("catalog", "List the built-in models");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  try {
    if (*jet_cmd) {
      const ModelPtr model = jet_source.resolve();
      const Point z = parse_point(jet_point);
      MatrixJet2 jet = jet_numeric
                           ? jet_at_numeric(*model, z, jet_order, {jet_radius, jet_nodes})
                           : jet_at(*model, z, jet_order);
      if (jet_normalize) jet = normalize(jet).jet;
      std::cout << io::jet_to_json(jet).dump(2) << '\n';
      return 0;
    }
    if (*inv_cmd) {
      const ModelPtr model = inv_source.resolve();
      const unsigned k = resolve_order(*model, *model, inv_k);
      const MatrixJet2 jet = normalize(jet_at(*model, parse_point(inv_point), k - 1)).jet;
      const InvariantSet set =
          inv_oracle ? oracle_invariants_direct(jet, k) : extract_invariants(jet, k);
      std::cout << io::invariants_to_json(set).dump(2) << '\n';
      return 0;
    }
    if (*cmp_cmd) {
      io::Config cfg = io::config_from_json(io::read_json_file(cmp_config));
      ComparisonRequest request = request_from(cfg);
      if (cmp_k) request.options.k = cmp_k;
      if (cmp_metric) request.path = Path::Metric;
      if (!cmp_point.empty()) request.points = {parse_point(cmp_point)};
      if (request.points.empty()) throw DomainError("compare: no point given");
      request.points.resize(1);
      request.grid.reset();
      request.threads = 1;
      const ComparisonReport report = sweep(request);
      std::cout << io::report_summary(report);
      if (!cmp_json.empty()) write_file(cmp_json, io::report_to_json(report, request).dump(2) + "\n");
      const PointRecord &r = report.points.front();
      return r.verdict ? exit_code(r.verdict->status) : kExitError;
    }
    if (*sw_cmd) {
      io::Config cfg = io::config_from_json(io::read_json_file(sw_config));
      ComparisonRequest request = request_from(cfg);
      if (sw_metric) request.path = Path::Metric;
      request.threads = sw_threads;
      request.timing = sw_timing;
      request.options.keep_invariants = sw_dump;
      const ComparisonReport report = sweep(request);
      std::cout << io::report_summary(report);
      if (!sw_json.empty()) write_file(sw_json, io::report_to_json(report, request).dump(2) + "\n");
      if (!sw_csv.empty()) write_file(sw_csv, io::report_csv(report, request.model_a->variables()));
      return exit_code(report);
    }
    if (*sp_cmd) {
      const Json input = io::read_json_file(sp_input);
      if (!input.contains("a") || !input.contains("b"))
        throw DomainError(sp_input + ": expected tuples 'a' and 'b'");
      const MatrixTuple a = io::tuple_from_json(input.at("a"));
      const MatrixTuple b = io::tuple_from_json(input.at("b"));
      const EquivalenceVerdict v = specht_test(a, b, sp_options);
      std::cout << io::verdict_to_json(v).dump(2) << '\n';
      return exit_code(v.status);
    }
    if (*cat_cmd) {
      for (const auto &[name, model] : standard_catalog())
        std::cout << name << "\tm=" << model->variables() << " n=" << model->rank()
                  << '\t' << model->describe() << '\n';
      return 0;
    }
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  }
  return kExitUsage;
}
