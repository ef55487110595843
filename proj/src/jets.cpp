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

#include "cdloc/jets.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "cdloc/errors.hpp"

namespace cdloc {

namespace {

void require_point(const Point &p, std::size_t m, const char *what) {
  if (p.size() != m)
    throw ShapeError(std::string(what) + ": basepoint has " +
                     std::to_string(p.size()) + " coordinates, expected " +
                     std::to_string(m));
}

bool same_point(const Point &a, const Point &b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (std::abs(a[i] - b[i]) > 1e-14 * (1.0 + std::abs(a[i]))) return false;
  return true;
}

// (z - z0)^P for a multi-index P.
Complex monomial(const Point &offset, const MultiIndex &p) {
  Complex r = 1.0;
  for (std::size_t i = 0; i < p.size(); ++i)
    for (unsigned k = 0; k < p[i]; ++k) r *= offset[i];
  return r;
}

} // namespace

HoloJet::HoloJet(std::size_t m, std::size_t n, unsigned d, Point basepoint)
    : ordering_(m, d), n_(n), basepoint_(std::move(basepoint)),
      coeffs_(ordering_.size(), Matrix::Zero(n, n)) {
  require_point(basepoint_, m, "HoloJet");
}

HoloJet HoloJet::constant(const Matrix &value, std::size_t m, unsigned d,
                          Point basepoint) {
  if (value.rows() != value.cols())
    throw ShapeError("HoloJet::constant: value must be square");
  HoloJet jet(m, value.rows(), d, std::move(basepoint));
  jet.coeffs_[0] = value;
  return jet;
}

HoloJet HoloJet::identity(std::size_t m, std::size_t n, unsigned d,
                          Point basepoint) {
  return constant(Matrix::Identity(n, n), m, d, std::move(basepoint));
}

HoloJet HoloJet::recentered(const Point &point, unsigned d) const {
  require_point(point, variables(), "HoloJet::recentered");
  Point offset(point.size());
  for (std::size_t i = 0; i < point.size(); ++i)
    offset[i] = point[i] - basepoint_[i];
  HoloJet out(variables(), n_, d, point);
  // d^K of sum_I C[I] (z - z0)^I / I!  =  sum_{I >= K} C[I] (z - z0)^{I-K} / (I-K)!
  for (std::size_t pk = 0; pk < out.ordering_.size(); ++pk) {
    const MultiIndex &k = out.ordering_[pk];
    for (std::size_t pi = 0; pi < ordering_.size(); ++pi) {
      const MultiIndex &i = ordering_[pi];
      if (!geq(i, k)) continue;
      const MultiIndex rest = sub(i, k);
      out.coeffs_[pk] +=
          coeffs_[pi] * (monomial(offset, rest) / double(factorial(rest)));
    }
  }
  return out;
}

Matrix HoloJet::evaluate(const Point &point) const {
  return recentered(point, 0).coeffs_[0];
}

MatrixJet2::MatrixJet2(std::size_t m, std::size_t n, unsigned d,
                       Point basepoint)
    : ordering_(m, d), n_(n), basepoint_(std::move(basepoint)),
      table_(ordering_.size() * ordering_.size(), Matrix::Zero(n, n)) {
  require_point(basepoint_, m, "MatrixJet2");
}

MatrixJet2 MatrixJet2::truncated(unsigned d) const {
  if (d > order())
    throw ShapeError("MatrixJet2::truncated: requested order " +
                     std::to_string(d) + " exceeds jet order " +
                     std::to_string(order()));
  MatrixJet2 out(variables(), n_, d, basepoint_);
  const std::size_t l = out.ordering_.size();
  // Graded ordering: the first l positions of a higher-order ordering are
  // exactly the indices of degree <= d.
  for (std::size_t i = 0; i < l; ++i)
    for (std::size_t j = 0; j < l; ++j) out.at(i, j) = at(i, j);
  return out;
}

double MatrixJet2::hermitian_defect() const {
  double worst = 0.0;
  const std::size_t l = ordering_.size();
  for (std::size_t i = 0; i < l; ++i)
    for (std::size_t j = i; j < l; ++j)
      worst = std::max(worst, (at(j, i) - at(i, j).adjoint()).cwiseAbs().maxCoeff());
  return worst;
}

double MatrixJet2::normalization_defect() const {
  double worst =
      (at(0, 0) - Matrix::Identity(n_, n_)).cwiseAbs().maxCoeff();
  for (std::size_t i = 1; i < ordering_.size(); ++i) {
    worst = std::max(worst, at(i, 0).cwiseAbs().maxCoeff());
    worst = std::max(worst, at(0, i).cwiseAbs().maxCoeff());
  }
  return worst;
}

double MatrixJet2::max_abs() const {
  double worst = 0.0;
  for (const Matrix &block : table_)
    worst = std::max(worst, block.cwiseAbs().maxCoeff());
  return worst;
}

MatrixJet2 &MatrixJet2::operator*=(double c) {
  for (Matrix &block : table_) block *= c;
  return *this;
}

MatrixJet2 operator*(double c, MatrixJet2 jet) {
  jet *= c;
  return jet;
}

MatrixJet2 sandwich(const HoloJet &left, const MatrixJet2 &kernel,
                    const HoloJet &right) {
  const std::size_t m = kernel.variables();
  const std::size_t n = kernel.rank();
  const unsigned d = kernel.order();
  for (const HoloJet *side : {&left, &right}) {
    if (side->variables() != m || side->order() < d)
      throw ShapeError("sandwich: frame jet shape does not cover kernel jet");
    if (!same_point(side->basepoint(), kernel.basepoint()))
      throw ShapeError("sandwich: basepoint mismatch");
  }
  if (left.rank() != right.rank() ||
      static_cast<std::size_t>(left.at(0).cols()) != n)
    throw ShapeError("sandwich: rank mismatch");

  const IndexOrdering &ord = kernel.ordering();
  const std::size_t l = ord.size();
  MatrixJet2 out(m, left.rank(), d, kernel.basepoint());

  // Intermediate X[I][J] = sum_{A <= I} C(I,A) L[A] K[I-A][J], then
  // out[I][J] = sum_{B <= J} C(J,B) X[I][J-B] R[B]^*.
  std::vector<Matrix> partial(l * l);
  for (std::size_t pi = 0; pi < l; ++pi) {
    const MultiIndex &i = ord[pi];
    for (std::size_t pj = 0; pj < l; ++pj) {
      Matrix acc = Matrix::Zero(left.rank(), n);
      for (std::size_t pa = 0; pa < l; ++pa) {
        const MultiIndex &a = ord[pa];
        if (!geq(i, a)) continue;
        acc += double(binomial(i, a)) * left[a] *
               kernel.at(ord.position(sub(i, a)), pj);
      }
      partial[pi * l + pj] = std::move(acc);
    }
  }
  for (std::size_t pi = 0; pi < l; ++pi) {
    for (std::size_t pj = 0; pj < l; ++pj) {
      const MultiIndex &j = ord[pj];
      Matrix acc = Matrix::Zero(left.rank(), right.rank());
      for (std::size_t pb = 0; pb < l; ++pb) {
        const MultiIndex &b = ord[pb];
        if (!geq(j, b)) continue;
        acc += double(binomial(j, b)) *
               partial[pi * l + ord.position(sub(j, b))] * right[b].adjoint();
      }
      out.at(pi, pj) = std::move(acc);
    }
  }
  return out;
}

HoloJet multiply(const HoloJet &f, const HoloJet &g) {
  if (f.variables() != g.variables() || f.rank() != g.rank() ||
      !same_point(f.basepoint(), g.basepoint()))
    throw ShapeError("multiply: jet shape mismatch");
  const unsigned d = std::min(f.order(), g.order());
  HoloJet out(f.variables(), f.rank(), d, f.basepoint());
  const IndexOrdering &ord = out.ordering();
  for (std::size_t pi = 0; pi < ord.size(); ++pi) {
    const MultiIndex &i = ord[pi];
    for (std::size_t pa = 0; pa < ord.size(); ++pa) {
      const MultiIndex &a = ord[pa];
      if (!geq(i, a)) continue;
      out.at(pi) += double(binomial(i, a)) * f[a] * g[sub(i, a)];
    }
  }
  return out;
}

HoloJet holo_invert(const HoloJet &f) {
  const Matrix &value = f.at(0);
  if (!(condition_number(value) <= kConditionLimit))
    throw NumericalError("holo_invert: frame value is singular or "
                         "ill-conditioned (condition number > 1e12)");
  const Eigen::PartialPivLU<Matrix> lu(value);
  HoloJet g(f.variables(), f.rank(), f.order(), f.basepoint());
  g.at(0) = lu.inverse();
  const IndexOrdering &ord = f.ordering();
  // Graded ordering guarantees G[I - A] is known when G[I] is formed.
  for (std::size_t pi = 1; pi < ord.size(); ++pi) {
    const MultiIndex &i = ord[pi];
    Matrix acc = Matrix::Zero(f.rank(), f.rank());
    for (std::size_t pa = 1; pa < ord.size(); ++pa) {
      const MultiIndex &a = ord[pa];
      if (!geq(i, a)) continue;
      acc += double(binomial(i, a)) * f[a] * g[sub(i, a)];
    }
    g.at(pi) = -lu.solve(acc);
  }
  return g;
}

HoloJet restrict_left(const MatrixJet2 &kernel) {
  HoloJet out(kernel.variables(), kernel.rank(), kernel.order(),
              kernel.basepoint());
  for (std::size_t pi = 0; pi < kernel.ordering().size(); ++pi)
    out.at(pi) = kernel.at(pi, 0);
  return out;
}

Matrix hermitian_sqrt(const Matrix &a) {
  if (a.rows() != a.cols()) throw ShapeError("hermitian_sqrt: not square");
  const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
  if ((a - a.adjoint()).cwiseAbs().maxCoeff() > 1e-10 * scale)
    throw NumericalError("hermitian_sqrt: matrix is not Hermitian");
  const Eigen::SelfAdjointEigenSolver<Matrix> eig(a);
  const Eigen::VectorXd &values = eig.eigenvalues();
  if (!(values.minCoeff() > 1e-14 * std::max(1.0, values.maxCoeff())))
    throw NumericalError("hermitian_sqrt: matrix is not positive definite");
  return eig.eigenvectors() * values.cwiseSqrt().asDiagonal() *
         eig.eigenvectors().adjoint();
}

double condition_number(const Matrix &a) {
  if (a.size() == 0) return 1.0;
  const Eigen::JacobiSVD<Matrix> svd(a);
  const auto &s = svd.singularValues();
  const double smin = s(s.size() - 1);
  if (!(smin > 0.0)) return std::numeric_limits<double>::infinity();
  return s(0) / smin;
}

} // namespace cdloc
