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

// JSON interchange. Complex numbers are [re, im] pairs (a bare number is
// accepted on input), matrices are arrays of rows, multi-indices are integer
// arrays and points are arrays of complex coordinates.

#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>

#include "json.hpp"

#include "cdloc/compare.hpp"
#include "cdloc/kernels.hpp"
#include "cdloc/localization.hpp"
#include "cdloc/specht.hpp"

namespace cdloc::io {

using Json = nlohmann::json;

Json to_json(Complex c);
Json to_json(const Matrix &m);
Json to_json(const MultiIndex &i);
Json point_to_json(const Point &p);

Complex complex_from_json(const Json &j);
Matrix matrix_from_json(const Json &j);
MultiIndex multiindex_from_json(const Json &j);
Point point_from_json(const Json &j);

/// Model descriptor; see README for the accepted "type" values.
ModelPtr model_from_json(const Json &j);

Json jet_to_json(const MatrixJet2 &jet);
Json invariants_to_json(const InvariantSet &invariants);
Json tuple_to_json(const MatrixTuple &t);
MatrixTuple tuple_from_json(const Json &j);
Json verdict_to_json(const EquivalenceVerdict &v);
Json record_to_json(const PointRecord &r);
Json report_to_json(const ComparisonReport &report, const ComparisonRequest &request);

/// Human-readable summary, one line per point plus totals.
std::string report_summary(const ComparisonReport &report);
/// index,re(z1),im(z1),...,k,status,distance
std::string report_csv(const ComparisonReport &report, std::size_t m);

struct Config {
  std::map<std::string, ModelPtr> models;
  /// Names of the two models to compare (default "A" and "B").
  std::pair<std::string, std::string> compare{"A", "B"};
  std::vector<Point> points;
  std::optional<GridSpec> grid;
  ComparisonOptions options;
  Path path = Path::Invariants;
};

Config config_from_json(const Json &j);

/// Parses the file; throws DomainError with the file name on failure.
Json read_json_file(const std::string &path);

} // namespace cdloc::io
