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
#include <limits>

#include <Eigen/Eigenvalues>

#include "cdloc/errors.hpp"
#include "cdloc/kernels.hpp"
#include "test_util.hpp"

using namespace cdloc;
using namespace cdloc::testing;

namespace {

Complex entry(const MatrixJet2 &jet, std::initializer_list<unsigned> i,
              std::initializer_list<unsigned> j) {
  return jet(MultiIndex(i), MultiIndex(j))(0, 0);
}

// Oracle: (1 - <z,w>)^{-weight} = sum_P (weight)_{|P|} / P! z^P conj(w)^P,
// truncated, differentiated term by term in plain loops.
Complex binomial_series_oracle(double weight, const Point &z0, const MultiIndex &i,
                               const MultiIndex &j, unsigned max_degree) {
  const std::size_t m = z0.size();
  Complex total = 0.0;
  const IndexOrdering all(m, max_degree);
  for (const MultiIndex &p : all) {
    if (!geq(p, i) || !geq(p, j)) continue;
    double log_coeff = std::lgamma(weight + p.degree()) - std::lgamma(weight);
    for (std::size_t c = 0; c < m; ++c) log_coeff -= std::lgamma(p[c] + 1.0);
    const double coeff = std::exp(log_coeff);
    Complex term = coeff * double(falling(p, i)) * double(falling(p, j));
    for (std::size_t c = 0; c < m; ++c) {
      term *= std::pow(z0[c], int(p[c] - i[c]));
      term *= std::pow(std::conj(z0[c]), int(p[c] - j[c]));
    }
    total += term;
  }
  return total;
}

void check_hermitian_positive(const MatrixJet2 &jet) {
  CHECK(jet.hermitian_defect() <= 1e-12 * std::max(1.0, jet.max_abs()));
  const Eigen::SelfAdjointEigenSolver<Matrix> eig(jet.at(0, 0));
  CHECK(eig.eigenvalues().minCoeff() > 0.0);
}

} // namespace

TEST_CASE("Szego and Bergman jets at the origin") {
  const MatrixJet2 s = jet_at(*szego(), {0.0}, 1);
  CHECK(std::abs(entry(s, {0}, {0}) - 1.0) < 1e-15);
  CHECK(std::abs(entry(s, {1}, {0})) < 1e-15);
  CHECK(std::abs(entry(s, {0}, {1})) < 1e-15);
  CHECK(std::abs(entry(s, {1}, {1}) - 1.0) < 1e-15);

  const MatrixJet2 b = jet_at(*bergman(), {0.0}, 1);
  CHECK(std::abs(entry(b, {1}, {1}) - 2.0) < 1e-15);

  const MatrixJet2 half = jet_at(*szego(), {0.5}, 1);
  CHECK(std::abs(entry(half, {0}, {0}) - 4.0 / 3.0) < 1e-15);
}

TEST_CASE("closed-form jets match the series-expansion oracle") {
  Rng rng(11);
  for (int trial = 0; trial < 6; ++trial) {
    const Point z1 = random_point(1, 0.5, rng);
    const double weight = 0.5 + trial;
    const MatrixJet2 jet = jet_at(*product_polydisc({weight}), z1, 3);
    for (const MultiIndex &i : jet.ordering())
      for (const MultiIndex &j : jet.ordering()) {
        const Complex expected = binomial_series_oracle(weight, z1, i, j, 250);
        CHECK(std::abs(jet(i, j)(0, 0) - expected) < 1e-10 * std::max(1.0, std::abs(expected)));
      }

    const Point z2 = random_point(2, 0.45, rng);
    const MatrixJet2 bj = jet_at(*ball(2, weight), z2, 2);
    for (const MultiIndex &i : bj.ordering())
      for (const MultiIndex &j : bj.ordering()) {
        const Complex expected = binomial_series_oracle(weight, z2, i, j, 90);
        CHECK(std::abs(bj(i, j)(0, 0) - expected) < 1e-10 * std::max(1.0, std::abs(expected)));
      }

    // Product kernel: d^I dbar^J factorizes over the coordinates.
    const MatrixJet2 pj = jet_at(*product_polydisc({weight, 1.0}), z2, 2);
    for (const MultiIndex &i : pj.ordering())
      for (const MultiIndex &j : pj.ordering()) {
        const Complex expected =
            binomial_series_oracle(weight, {z2[0]}, MultiIndex{i[0]}, MultiIndex{j[0]}, 250) *
            binomial_series_oracle(1.0, {z2[1]}, MultiIndex{i[1]}, MultiIndex{j[1]}, 250);
        CHECK(std::abs(pj(i, j)(0, 0) - expected) < 1e-10 * std::max(1.0, std::abs(expected)));
      }
  }
}

TEST_CASE("power series jets by termwise differentiation") {
  // K = 1 + 2 z conj(w) + (0.5 i) z^2 - (0.5 i) conj(w)^2 ... Hermitian pairs.
  std::map<std::pair<MultiIndex, MultiIndex>, Matrix> terms;
  terms[{MultiIndex{0}, MultiIndex{0}}] = Matrix::Constant(1, 1, 1.0);
  terms[{MultiIndex{1}, MultiIndex{1}}] = Matrix::Constant(1, 1, 2.0);
  terms[{MultiIndex{2}, MultiIndex{0}}] = Matrix::Constant(1, 1, Complex(0, 0.1));
  terms[{MultiIndex{0}, MultiIndex{2}}] = Matrix::Constant(1, 1, Complex(0, -0.1));
  const ModelPtr model = power_series(1, 1, terms);
  const Complex z(0.3, 0.2);
  const MatrixJet2 jet = jet_at(*model, {z}, 2);
  // Direct differentiation by hand.
  CHECK(std::abs(entry(jet, {0}, {0}) - (1.0 + 2.0 * std::norm(z) +
                                          Complex(0, 0.1) * z * z -
                                          Complex(0, 0.1) * std::conj(z * z))) < 1e-15);
  CHECK(std::abs(entry(jet, {1}, {0}) - (2.0 * std::conj(z) + Complex(0, 0.2) * z)) < 1e-15);
  CHECK(std::abs(entry(jet, {1}, {1}) - 2.0) < 1e-15);
  CHECK(std::abs(entry(jet, {2}, {0}) - Complex(0, 0.2)) < 1e-15);
  CHECK(std::abs(entry(jet, {2}, {2})) < 1e-15);

  auto broken = terms;
  broken[{MultiIndex{0}, MultiIndex{2}}] = Matrix::Constant(1, 1, Complex(0, 0.1));
  CHECK_THROWS_AS(power_series(1, 1, broken), DomainError);
}

TEST_CASE("descriptor wrappers") {
  const Point z0{Complex(0.2, -0.1)};
  const MatrixJet2 base = jet_at(*bergman(), z0, 2);

  const MatrixJet2 same = jet_at(*transform(bergman(), Matrix::Identity(1, 1)), z0, 2);
  CHECK(max_abs_diff(same, base) == 0.0);

  const MatrixJet2 doubled = jet_at(*scale(szego(), 2.0), {0.0}, 2);
  const MatrixJet2 plain = jet_at(*szego(), {0.0}, 2);
  CHECK(max_abs_diff(doubled, 2.0 * plain) == 0.0);

  const MatrixJet2 sum = jet_at(*direct_sum(szego(), bergman()), {0.0}, 1);
  Matrix d00 = Matrix::Identity(2, 2), d11 = Matrix::Identity(2, 2);
  d11(1, 1) = 2.0;
  CHECK((sum(MultiIndex{0}, MultiIndex{0}) - d00).norm() < 1e-15);
  CHECK((sum(MultiIndex{1}, MultiIndex{1}) - d11).norm() < 1e-15);
  CHECK(sum(MultiIndex{1}, MultiIndex{0}).norm() < 1e-15);
}

TEST_CASE("scaling is exact and unitary conjugation acts blockwise") {
  Rng rng(12);
  for (const auto &[name, model] : standard_catalog()) {
    CAPTURE(name);
    const Point z = random_point(model->variables(), 0.4, rng);
    const MatrixJet2 jet = jet_at(*model, z, 2);
    check_hermitian_positive(jet);
    CHECK(max_abs_diff(jet_at(*scale(model, 3.0), z, 2), 3.0 * jet) == 0.0);

    const Matrix u = random_unitary(model->rank(), rng);
    const MatrixJet2 conj = jet_at(*transform(model, u), z, 2);
    double worst = 0.0;
    for (std::size_t i = 0; i < jet.ordering().size(); ++i)
      for (std::size_t j = 0; j < jet.ordering().size(); ++j)
        worst = std::max(worst, (conj.at(i, j) - u * jet.at(i, j) * u.adjoint()).norm());
    CHECK(worst < 1e-12 * std::max(1.0, jet.max_abs()));
  }
}

TEST_CASE("domain and shape errors") {
  CHECK_THROWS_AS(jet_at(*szego(), {1.2}, 1), DomainError);
  CHECK_THROWS_AS(jet_at(*ball(2, 1.0), {0.8, 0.8}, 1), DomainError);
  CHECK_THROWS_AS(jet_at(*szego(2), {0.1}, 1), ShapeError);
  CHECK_THROWS_AS(direct_sum(szego(1), szego(2)), ShapeError);
  CHECK_THROWS_AS(transform(szego(), Matrix::Identity(2, 2)), ShapeError);
  CHECK_THROWS_AS(transform(szego(), Matrix::Zero(1, 1)), DomainError);
  CHECK_THROWS_AS(scale(szego(), -1.0), DomainError);
  CHECK_THROWS_AS(product_polydisc({1.0, 0.0}), DomainError);
  CHECK(contains(*szego(), {Complex(0.6, 0.6)}));
  CHECK_FALSE(contains(*szego(), {Complex(0.8, 0.8)}));
  CHECK(std::isinf(boundary_distance(*standard_catalog()[9].second, {5.0})));
}

TEST_CASE("quadrature is exact on polynomial kernels") {
  for (const auto &[name, model] : standard_catalog()) {
    if (!std::holds_alternative<PowerSeries>(model->variant())) continue;
    CAPTURE(name);
    for (double r : {0.1, 0.5, 2.0}) {
      const Point z(model->variables(), Complex(0.3, -0.2));
      const MatrixJet2 exact = jet_at(*model, z, 2);
      const MatrixJet2 numeric = jet_at_numeric(*model, z, 2, {r, 8});
      CHECK(max_abs_diff(exact, numeric) < 1e-12 * std::max(1.0, exact.max_abs()));
    }
  }
}

TEST_CASE("quadrature of a constant kernel") {
  CustomKernel k;
  k.m = 2;
  k.n = 2;
  k.evaluate = [](std::span<const Complex>, std::span<const Complex>) {
    return Matrix(Matrix::Identity(2, 2));
  };
  const MatrixJet2 jet = jet_at_numeric(*custom(k), {0.1, 0.2}, 2);
  CHECK((jet.at(0, 0) - Matrix::Identity(2, 2)).norm() < 1e-14);
  double rest = 0.0;
  for (std::size_t i = 0; i < jet.ordering().size(); ++i)
    for (std::size_t j = 0; j < jet.ordering().size(); ++j)
      if (i || j) rest = std::max(rest, jet.at(i, j).norm());
  CHECK(rest < 1e-14);
}

TEST_CASE("quadrature matches the Szego jet") {
  const MatrixJet2 exact = jet_at(*szego(), {0.0}, 2);
  const MatrixJet2 numeric = jet_at_numeric(*szego(), {0.0}, 2, {0.5, 16});
  CHECK(max_abs_diff(exact, numeric) < 1e-8);

  // Default radius at an interior point, with enough nodes to push the
  // aliasing error below roundoff.
  const Point z{Complex(0.3, 0.2)};
  CHECK(max_abs_diff(jet_at(*bergman(), z, 2), jet_at_numeric(*bergman(), z, 2, {{}, 48})) <
        1e-9);
}

TEST_CASE("custom kernels go through quadrature") {
  CustomKernel k;
  k.m = 1;
  k.n = 1;
  k.label = "szego-closed-form";
  k.evaluate = [](std::span<const Complex> z, std::span<const Complex> w) {
    return Matrix(Matrix::Constant(1, 1, 1.0 / (1.0 - z[0] * std::conj(w[0]))));
  };
  k.boundary_distance = [](std::span<const Complex> z) { return 1.0 - std::abs(z[0]); };
  const ModelPtr model = custom(k);
  // Default nodes: aliasing error of order 2^-12.
  CHECK(max_abs_diff(jet_at(*model, {0.2}, 2), jet_at(*szego(), {0.2}, 2)) < 1e-6);
  CHECK_THROWS_AS(jet_at(*model, {1.5}, 2), DomainError);

  CustomKernel bad = k;
  bad.evaluate = [](std::span<const Complex>, std::span<const Complex>) -> Matrix {
    throw std::runtime_error("boom");
  };
  CHECK_THROWS_AS(jet_at_numeric(*custom(bad), {0.0}, 1), NumericalError);

  CustomKernel nan = k;
  nan.evaluate = [](std::span<const Complex>, std::span<const Complex>) {
    return Matrix(Matrix::Constant(1, 1, std::numeric_limits<double>::quiet_NaN()));
  };
  CHECK_THROWS_AS(jet_at_numeric(*custom(nan), {0.0}, 1), NumericalError);
  CHECK_THROWS_AS(jet_at_numeric(*szego(), {0.0}, 3, {0.5, 3}), DomainError);
}
