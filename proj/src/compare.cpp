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

#include "cdloc/compare.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <thread>

#include "cdloc/errors.hpp"

namespace cdloc {

namespace {

std::string pair_label(char prefix, const MultiIndex &i, const MultiIndex &j) {
  return std::string(1, prefix) + i.to_string() + j.to_string();
}

PointRecord finish(const Point &z, unsigned k, MatrixTuple ta, MatrixTuple tb,
                   const ComparisonOptions &options) {
  PointRecord record;
  record.z = z;
  record.k = k;
  record.verdict = specht_test(ta, tb, options.specht);
  if (record.verdict->certificate) record.distance = record.verdict->residual;
  if (options.keep_invariants) {
    record.tuple_a = std::move(ta);
    record.tuple_b = std::move(tb);
  }
  return record;
}

} // namespace

MatrixTuple to_tuple(const InvariantSet &invariants) {
  std::vector<Matrix> members;
  std::vector<std::string> labels;
  for (const auto &[i, j] : invariants.keys()) {
    members.push_back(invariants.at(i, j));
    labels.push_back(pair_label('K', i, j));
  }
  return MatrixTuple(std::move(members), std::move(labels));
}

MatrixTuple metric_tuple(const MatrixJet2 &normalized, unsigned k) {
  if (k == 0 || normalized.order() + 1 < k)
    throw ShapeError("metric_tuple: jet order too low for k");
  const IndexOrdering ord(normalized.variables(), k - 1);
  std::vector<Matrix> members;
  std::vector<std::string> labels;
  for (std::size_t pi = 0; pi < ord.size(); ++pi)
    for (std::size_t pj = 0; pj < ord.size(); ++pj) {
      if (pi == 0 && pj == 0) continue;
      members.push_back(normalized.at(pi, pj));
      labels.push_back(pair_label('D', ord[pi], ord[pj]));
    }
  return MatrixTuple(std::move(members), std::move(labels));
}

unsigned resolve_order(const KernelModel &a, const KernelModel &b, unsigned k) {
  if (a.variables() != b.variables())
    throw ShapeError("models act on different numbers of variables (" +
                     std::to_string(a.variables()) + " vs " +
                     std::to_string(b.variables()) + ")");
  if (a.rank() != b.rank())
    throw ShapeError("models have different ranks (" + std::to_string(a.rank()) +
                     " vs " + std::to_string(b.rank()) + ")");
  const unsigned order = k ? k : unsigned(a.rank()) + 1;
  if (order < 2)
    throw DomainError("localization order k must be >= 2");
  return order;
}

PointRecord compare_localizations(const KernelModel &a, const KernelModel &b,
                                  const Point &z,
                                  const ComparisonOptions &options) {
  const unsigned k = resolve_order(a, b, options.k);
  const MatrixJet2 na = normalize(jet_at(a, z, k - 1)).jet;
  const MatrixJet2 nb = normalize(jet_at(b, z, k - 1)).jet;
  return finish(z, k, to_tuple(extract_invariants(na, k)),
                to_tuple(extract_invariants(nb, k)), options);
}

PointRecord compare_via_metric(const KernelModel &a, const KernelModel &b,
                               const Point &z, const ComparisonOptions &options) {
  const unsigned k = resolve_order(a, b, options.k);
  const MatrixJet2 na = normalize(jet_at(a, z, k - 1)).jet;
  const MatrixJet2 nb = normalize(jet_at(b, z, k - 1)).jet;
  // Same validity requirement as the invariant path.
  build_block_gram(na, k);
  build_block_gram(nb, k);
  return finish(z, k, metric_tuple(na, k), metric_tuple(nb, k), options);
}

std::vector<Point> expand_grid(const GridSpec &grid, std::size_t m) {
  if (grid.axes.size() != 2 * m)
    throw ShapeError("grid needs 2m = " + std::to_string(2 * m) +
                     " axes (real and imaginary part per variable), got " +
                     std::to_string(grid.axes.size()));
  std::size_t total = 1;
  for (const GridAxis &axis : grid.axes) {
    if (!(axis.min <= axis.max))
      throw DomainError("grid axis with min > max");
    total *= axis.count;
  }
  std::vector<Point> out;
  out.reserve(total);
  if (total == 0) return out;
  std::vector<std::size_t> digit(grid.axes.size(), 0);
  auto coordinate = [&](std::size_t a) {
    const GridAxis &axis = grid.axes[a];
    if (axis.count == 1) return axis.min;
    return axis.min + (axis.max - axis.min) * double(digit[a]) / double(axis.count - 1);
  };
  for (std::size_t flat = 0; flat < total; ++flat) {
    Point z(m);
    for (std::size_t c = 0; c < m; ++c)
      z[c] = Complex(coordinate(2 * c), coordinate(2 * c + 1));
    out.push_back(std::move(z));
    for (std::size_t a = digit.size(); a-- > 0;) {
      if (++digit[a] < grid.axes[a].count) break;
      digit[a] = 0;
    }
  }
  return out;
}

ComparisonReport sweep(const ComparisonRequest &request) {
  if (!request.model_a || !request.model_b)
    throw DomainError("sweep: both models are required");
  std::vector<Point> points = request.points;
  if (request.grid) {
    auto grid = expand_grid(*request.grid, request.model_a->variables());
    points.insert(points.end(), grid.begin(), grid.end());
  }

  ComparisonReport report;
  report.points.resize(points.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < points.size(); i = next++) {
      const auto start = std::chrono::steady_clock::now();
      PointRecord record;
      try {
        record = request.path == Path::Invariants
                     ? compare_localizations(*request.model_a, *request.model_b,
                                             points[i], request.options)
                     : compare_via_metric(*request.model_a, *request.model_b,
                                          points[i], request.options);
      } catch (const std::exception &e) {
        record = PointRecord{};
        record.z = points[i];
        record.error = e.what();
      }
      record.index = i;
      if (request.timing)
        record.seconds = std::chrono::duration<double>(
                             std::chrono::steady_clock::now() - start)
                             .count();
      report.points[i] = std::move(record);
    }
  };
  unsigned threads = request.threads ? request.threads
                                     : std::max(1u, std::thread::hardware_concurrency());
  threads = unsigned(std::min<std::size_t>(threads, std::max<std::size_t>(1, points.size())));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }

  for (const PointRecord &record : report.points) {
    if (!record.verdict) {
      ++report.errors;
      report.all_equivalent = false;
      continue;
    }
    switch (record.verdict->status) {
    case Status::Equivalent: ++report.equivalent; break;
    case Status::Inequivalent:
      ++report.inequivalent;
      if (!report.first_inequivalent) report.first_inequivalent = record.index;
      report.all_equivalent = false;
      break;
    case Status::Inconclusive:
      ++report.inconclusive;
      report.all_equivalent = false;
      break;
    }
  }
  return report;
}

} // namespace cdloc
