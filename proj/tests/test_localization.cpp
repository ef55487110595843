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

#include "doctest.h"

#include <cmath>

#include "cdloc/errors.hpp"
#include "cdloc/kernels.hpp"
#include "cdloc/localization.hpp"
#include "test_util.hpp"

using namespace cdloc;
using namespace cdloc::testing;

namespace {

Matrix diag(std::initializer_list<Complex> values) {
  Matrix out = Matrix::Zero(values.size(), values.size());
  Eigen::Index i = 0;
  for (Complex v : values) out(i, i) = v, ++i;
  return out;
}

double max_diff(const InvariantSet &a, const InvariantSet &b) {
  double worst = 0.0;
  for (const auto &key : a.keys())
    worst = std::max(worst, (a.at(key.first, key.second) - b.at(key.first, key.second))
                                .cwiseAbs()
                                .maxCoeff());
  return worst;
}

double max_entry(const InvariantSet &a) {
  double worst = 0.0;
  for (const auto &[key, value] : a.entries) worst = std::max(worst, value.cwiseAbs().maxCoeff());
  return worst;
}

InvariantSet invariants_of(const KernelModel &model, const Point &z, unsigned k) {
  return extract_invariants(normalize(jet_at(model, z, k - 1)).jet, k);
}

// log K(z, z) for a weighted disc kernel, as a real function of (x, y).
double log_diagonal(double weight, double x, double y) {
  return -weight * std::log(1.0 - x * x - y * y);
}

} // namespace

TEST_CASE("normalize") {
  const MatrixJet2 b = jet_at(*bergman(), {0.0}, 2);
  CHECK(max_abs_diff(normalize(b).jet, b) < 1e-15);

  const Normalized twice = normalize(jet_at(*scale(szego(), 2.0), {0.0}, 2));
  CHECK(max_abs_diff(twice.jet, jet_at(*szego(), {0.0}, 2)) < 1e-15);
  CHECK(std::abs(twice.frame.at(0)(0, 0) - 1.0 / std::sqrt(2.0)) < 1e-15);

  const MatrixJet2 half = normalize(jet_at(*szego(), {0.5}, 1)).jet;
  CHECK(std::abs(half(MultiIndex{0}, MultiIndex{0})(0, 0) - 1.0) < 1e-14);
  CHECK(std::abs(half(MultiIndex{1}, MultiIndex{0})(0, 0)) < 1e-14);
  CHECK(std::abs(half(MultiIndex{1}, MultiIndex{1})(0, 0) - 16.0 / 9.0) < 1e-13);
}

TEST_CASE("normalize is idempotent and yields normalized jets") {
  Rng rng(21);
  for (const auto &[name, model] : standard_catalog()) {
    CAPTURE(name);
    const Point z = random_point(model->variables(), 0.5, rng);
    const MatrixJet2 once = normalize(jet_at(*model, z, 2)).jet;
    CHECK(once.normalization_defect() < 1e-10 * std::max(1.0, once.max_abs()));
    CHECK(max_abs_diff(normalize(once).jet, once) < 1e-12 * std::max(1.0, once.max_abs()));
  }
}

TEST_CASE("build_block_gram") {
  const BlockGram s = build_block_gram(jet_at(*szego(), {0.0}, 1), 2);
  CHECK((s.h - Matrix::Identity(2, 2)).norm() < 1e-15);

  const BlockGram b = build_block_gram(jet_at(*bergman(), {0.0}, 1), 2);
  CHECK((b.h - diag({1.0, 2.0})).norm() < 1e-15);

  const BlockGram sum = build_block_gram(jet_at(*direct_sum(szego(), bergman()), {0.0}, 1), 2);
  CHECK(sum.h.rows() == 4);
  CHECK((sum.block(1, 1) - diag({1.0, 2.0})).norm() < 1e-15);

  CHECK_THROWS_AS(build_block_gram(jet_at(*szego(), {0.0}, 1), 3), ShapeError);
  CHECK_THROWS_AS(build_block_gram(jet_at(*szego(), {0.0}, 1), 0), DomainError);

  MatrixJet2 bad(1, 1, 1, {0.0});
  bad.at(0, 0)(0, 0) = 1.0;
  bad.at(1, 1)(0, 0) = -1.0;
  CHECK_THROWS_AS(build_block_gram(bad, 2), NumericalError);
  bad.at(1, 1)(0, 0) = 1.0;
  bad.at(0, 1)(0, 0) = 0.5;
  CHECK_THROWS_AS(build_block_gram(bad, 2), NumericalError);
}

TEST_CASE("extract_invariants on the basic models") {
  const InvariantSet s = invariants_of(*szego(), {0.0}, 2);
  REQUIRE(s.entries.size() == 1);
  CHECK(std::abs(s.at(MultiIndex{1}, MultiIndex{1})(0, 0) - 1.0) < 1e-14);

  const InvariantSet b = invariants_of(*bergman(), {0.0}, 2);
  CHECK(std::abs(b.at(MultiIndex{1}, MultiIndex{1})(0, 0) - 0.5) < 1e-14);

  const InvariantSet sum = invariants_of(*direct_sum(szego(), bergman()), {0.0}, 2);
  CHECK((sum.at(MultiIndex{1}, MultiIndex{1}) - diag({1.0, 0.5})).norm() < 1e-14);

  const InvariantSet two = invariants_of(*szego(2), {0.0, 0.0}, 2);
  CHECK(two.keys().size() == 4);
  CHECK_THROWS_AS(two.at(MultiIndex{0, 0}, MultiIndex{1, 0}), DomainError);

  CHECK_THROWS_AS(extract_invariants(jet_at(*szego(), {0.5}, 1), 2), DomainError);
}

TEST_CASE("build_n_matrix, adjoint_matrix and compress_to_h1") {
  Matrix n1 = Matrix::Zero(2, 2);
  n1(1, 0) = 1.0;
  CHECK((build_n_matrix(MultiIndex{1}, 2, 1, 1) - n1).norm() == 0.0);

  // k = 3: d gamma -> gamma, d^2 gamma -> 2 d gamma.
  Matrix n3 = Matrix::Zero(3, 3);
  n3(1, 0) = 1.0;
  n3(2, 1) = 2.0;
  CHECK((build_n_matrix(MultiIndex{1}, 3, 1, 1) - n3).norm() == 0.0);
  Matrix n33 = Matrix::Zero(3, 3);
  n33(2, 0) = 2.0;
  CHECK((build_n_matrix(MultiIndex{2}, 3, 1, 1) - n33).norm() == 0.0);
  CHECK_THROWS_AS(build_n_matrix(MultiIndex{0}, 2, 1, 1), DomainError);

  const BlockGram b = build_block_gram(jet_at(*bergman(), {0.0}, 1), 2);
  Matrix adj = Matrix::Zero(2, 2);
  adj(0, 1) = 0.5;
  CHECK((adjoint_matrix(n1, b) - adj).norm() < 1e-15);
  CHECK(std::abs(compress_to_h1(adjoint_matrix(n1, b) * n1, b)(0, 0) - 0.5) < 1e-15);
  CHECK(compress_to_h1(n1, b).norm() < 1e-15);
}

TEST_CASE("fast route agrees with explicit operator matrices") {
  Rng rng(22);
  for (const auto &[name, model] : standard_catalog()) {
    CAPTURE(name);
    for (unsigned k : {2u, 3u}) {
      const Point z = random_point(model->variables(), 0.5, rng);
      const MatrixJet2 jet = normalize(jet_at(*model, z, k - 1)).jet;
      const InvariantSet fast = extract_invariants(jet, k);
      const InvariantSet slow = oracle_invariants_direct(jet, k);
      CHECK(fast.keys() == slow.keys());
      CHECK(max_diff(fast, slow) < 1e-9 * std::max(1.0, max_entry(fast)));
      CHECK(fast.adjoint_defect() < 1e-10 * std::max(1.0, max_entry(fast)));
    }
  }
}

TEST_CASE("invariants do not depend on scaling the kernel") {
  Rng rng(23);
  for (const auto &[name, model] : standard_catalog()) {
    CAPTURE(name);
    const Point z = random_point(model->variables(), 0.5, rng);
    const InvariantSet a = invariants_of(*model, z, 2);
    const InvariantSet b = invariants_of(*scale(model, 7.5), z, 2);
    CHECK(max_diff(a, b) < 1e-10 * std::max(1.0, max_entry(a)));
  }
}

TEST_CASE("second order invariant of a weighted disc kernel is the inverse curvature") {
  Rng rng(24);
  for (double weight : {1.0, 2.0, 3.5}) {
    for (int trial = 0; trial < 4; ++trial) {
      const Point z = random_point(1, 0.7, rng);
      const double r2 = std::norm(z[0]);
      const InvariantSet set = invariants_of(*product_polydisc({weight}), z, 2);
      const double m11 = set.at(MultiIndex{1}, MultiIndex{1})(0, 0).real();
      CHECK(std::abs(m11 - (1.0 - r2) * (1.0 - r2) / weight) < 1e-12);

      // d dbar log K(z, z) = Laplacian / 4 by central differences.
      const double h = 1e-4, x = z[0].real(), y = z[0].imag();
      const double lap = (log_diagonal(weight, x + h, y) + log_diagonal(weight, x - h, y) +
                          log_diagonal(weight, x, y + h) + log_diagonal(weight, x, y - h) -
                          4.0 * log_diagonal(weight, x, y)) /
                         (h * h);
      CHECK(std::abs(m11 * lap / 4.0 - 1.0) < 1e-5);
    }
  }
}

TEST_CASE("holomorphic frame changes give unitarily equivalent invariants") {
  Rng rng(25);
  for (const auto &[name, model] : standard_catalog()) {
    CAPTURE(name);
    const std::size_t m = model->variables(), n = model->rank();
    const unsigned k = unsigned(n) + 1;
    const Point z = random_point(m, 0.5, rng);
    const HoloJet f = random_frame_jet(m, n, k - 1, rng, z);

    const Normalized a = normalize(jet_at(*model, z, k - 1));
    const Normalized b = normalize(jet_at(*transform(model, f), z, k - 1));
    // Normalized frames differ by a constant unitary.
    const HoloJet t = multiply(multiply(b.frame, f), holo_invert(a.frame));
    const Matrix u = t.at(0);
    CHECK((u * u.adjoint() - Matrix::Identity(n, n)).norm() < 1e-10);
    for (std::size_t p = 1; p < t.ordering().size(); ++p) CHECK(t.at(p).norm() < 1e-9);

    const InvariantSet ia = extract_invariants(a.jet, k);
    const InvariantSet ib = extract_invariants(b.jet, k);
    double worst = 0.0;
    for (const auto &[i, j] : ia.keys())
      worst = std::max(worst, (ib.at(i, j) - u * ia.at(i, j) * u.adjoint()).norm());
    CHECK(worst < 1e-8 * std::max(1.0, max_entry(ia)));
  }
}
