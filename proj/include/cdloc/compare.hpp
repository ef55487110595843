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

// Comparison pipeline: jets -> normalization -> invariants -> Specht test,
// at a single point or over a sampled grid.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cdloc/kernels.hpp"
#include "cdloc/localization.hpp"
#include "cdloc/specht.hpp"

namespace cdloc {

struct ComparisonOptions {
  /// Localization order; 0 selects n + 1.
  unsigned k = 0;
  SpechtOptions specht;
  /// Keep both invariant sets (or normalized jets) in the record.
  bool keep_invariants = false;
};

struct PointRecord {
  std::size_t index = 0;
  Point z;
  unsigned k = 0;
  std::optional<EquivalenceVerdict> verdict;
  /// Tuples that were compared (model A, model B), when requested.
  std::optional<MatrixTuple> tuple_a;
  std::optional<MatrixTuple> tuple_b;
  /// max over members of ||U M_A U^* - M_B||_F when a certificate exists.
  std::optional<double> distance;
  std::string error;
  std::optional<double> seconds;
};

/// Members M^{IJ} in InvariantSet::keys() order, labelled "K(I)(J)".
MatrixTuple to_tuple(const InvariantSet &invariants);

/// Blocks D[I][J], |I|,|J| <= k-1, (I,J) != (0,0), of a normalized jet,
/// labelled "D(I)(J)".
MatrixTuple metric_tuple(const MatrixJet2 &normalized, unsigned k);

/// Resolved localization order for two models (default n + 1); validates
/// equal ranks and variable counts and k >= 2.
unsigned resolve_order(const KernelModel &a, const KernelModel &b, unsigned k);

/// Unitary equivalence of T|H_z^k and T~|H~_z^k via the invariants K_z^{IJ}.
PointRecord compare_localizations(const KernelModel &a, const KernelModel &b,
                                  const Point &z,
                                  const ComparisonOptions &options = {});

/// Same question via one constant unitary conjugating every normalized
/// metric derivative d^I dbar^J H.
PointRecord compare_via_metric(const KernelModel &a, const KernelModel &b,
                               const Point &z,
                               const ComparisonOptions &options = {});

struct GridAxis {
  double min = 0.0;
  double max = 0.0;
  std::size_t count = 0;
};

/// Axes are (Re z_1, Im z_1, ..., Re z_m, Im z_m); the last axis varies
/// fastest. A count of one samples min.
struct GridSpec {
  std::vector<GridAxis> axes;
};

std::vector<Point> expand_grid(const GridSpec &grid, std::size_t m);

enum class Path { Invariants, Metric };

struct ComparisonRequest {
  ModelPtr model_a;
  ModelPtr model_b;
  std::vector<Point> points;
  std::optional<GridSpec> grid;
  ComparisonOptions options;
  Path path = Path::Invariants;
  /// Worker threads; 0 selects the hardware concurrency.
  unsigned threads = 0;
  /// Record wall-clock time per point (makes reports non-reproducible).
  bool timing = false;
};

struct ComparisonReport {
  std::vector<PointRecord> points;
  /// True iff every point is Equivalent; vacuously true for no points. The
  /// claim covers the sampled points only.
  bool all_equivalent = true;
  std::optional<std::size_t> first_inequivalent;
  std::size_t equivalent = 0;
  std::size_t inequivalent = 0;
  std::size_t inconclusive = 0;
  std::size_t errors = 0;
};

/// Explicit points first, then the grid. Per-point failures are recorded,
/// not thrown; output order follows the point index.
ComparisonReport sweep(const ComparisonRequest &request);

} // namespace cdloc
