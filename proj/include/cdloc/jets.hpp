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

// Truncated jets at a single basepoint.
//
// A MatrixJet2 stores the mixed derivatives d^I dbar^J H(z0, z0) of a
// matrix function H(z, w) that is holomorphic in z and anti-holomorphic in w
// (a Gram kernel). A HoloJet stores d^I F(z0) of a holomorphic matrix
// function F. Entries are derivative values, not Taylor coefficients.

#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "cdloc/multiindex.hpp"

namespace cdloc {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
/// A point of C^m.
using Point = std::vector<Complex>;

/// Matrices whose condition number exceeds this are treated as singular.
inline constexpr double kConditionLimit = 1e12;

class HoloJet {
public:
  HoloJet() = default;
  /// Zero jet of the given shape.
  HoloJet(std::size_t m, std::size_t n, unsigned d, Point basepoint);

  /// Jet of the constant function z -> value.
  static HoloJet constant(const Matrix &value, std::size_t m, unsigned d,
                          Point basepoint);
  static HoloJet identity(std::size_t m, std::size_t n, unsigned d,
                          Point basepoint);

  std::size_t variables() const { return ordering_.variables(); }
  std::size_t rank() const { return n_; }
  unsigned order() const { return ordering_.max_degree(); }
  const Point &basepoint() const { return basepoint_; }
  const IndexOrdering &ordering() const { return ordering_; }

  Matrix &operator[](const MultiIndex &index) {
    return coeffs_[ordering_.position(index)];
  }
  const Matrix &operator[](const MultiIndex &index) const {
    return coeffs_[ordering_.position(index)];
  }
  Matrix &at(std::size_t pos) { return coeffs_[pos]; }
  const Matrix &at(std::size_t pos) const { return coeffs_[pos]; }

  /// Derivatives at another point of the Taylor polynomial this jet
  /// defines, i.e. the jet of sum_I C[I] (z - z0)^I / I! at `point`.
  HoloJet recentered(const Point &point, unsigned d) const;
  /// Value of the Taylor polynomial at `point`.
  Matrix evaluate(const Point &point) const;

private:
  IndexOrdering ordering_;
  std::size_t n_ = 0;
  Point basepoint_;
  std::vector<Matrix> coeffs_;
};

class MatrixJet2 {
public:
  MatrixJet2() = default;
  /// Zero jet of the given shape.
  MatrixJet2(std::size_t m, std::size_t n, unsigned d, Point basepoint);

  std::size_t variables() const { return ordering_.variables(); }
  std::size_t rank() const { return n_; }
  unsigned order() const { return ordering_.max_degree(); }
  const Point &basepoint() const { return basepoint_; }
  const IndexOrdering &ordering() const { return ordering_; }

  Matrix &operator()(const MultiIndex &i, const MultiIndex &j) {
    return at(ordering_.position(i), ordering_.position(j));
  }
  const Matrix &operator()(const MultiIndex &i, const MultiIndex &j) const {
    return at(ordering_.position(i), ordering_.position(j));
  }
  Matrix &at(std::size_t pi, std::size_t pj) {
    return table_[pi * ordering_.size() + pj];
  }
  const Matrix &at(std::size_t pi, std::size_t pj) const {
    return table_[pi * ordering_.size() + pj];
  }

  /// Same jet truncated to a lower order.
  MatrixJet2 truncated(unsigned d) const;

  /// max |D[J][I] - D[I][J]^*| over all pairs.
  double hermitian_defect() const;
  /// max of |D[0][0] - I| and the borders |D[I][0]|, |D[0][I]|.
  double normalization_defect() const;
  bool is_normalized(double tol) const { return normalization_defect() <= tol; }
  /// Largest entry modulus over the whole table.
  double max_abs() const;

  MatrixJet2 &operator*=(double c);

private:
  IndexOrdering ordering_;
  std::size_t n_ = 0;
  Point basepoint_;
  std::vector<Matrix> table_;
};

MatrixJet2 operator*(double c, MatrixJet2 jet);

/// Jet of L(z) K(z, w) R(w)^* by the two-variable Leibniz rule.
MatrixJet2 sandwich(const HoloJet &left, const MatrixJet2 &kernel,
                    const HoloJet &right);

/// Jet of the product F(z) G(z).
HoloJet multiply(const HoloJet &f, const HoloJet &g);

/// Jet of F(z)^{-1}; throws NumericalError when F(z0) is (near) singular.
HoloJet holo_invert(const HoloJet &f);

/// Jet of z -> K(z, z0): C[I] = D[I][0].
HoloJet restrict_left(const MatrixJet2 &kernel);

/// Unique Hermitian positive definite square root; throws NumericalError
/// for non-Hermitian or non-positive-definite input.
Matrix hermitian_sqrt(const Matrix &a);

/// 2-norm condition number of a square matrix (infinity when singular).
double condition_number(const Matrix &a);

} // namespace cdloc
