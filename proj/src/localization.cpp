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

#include "cdloc/localization.hpp"

#include <algorithm>
#include <string>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include "cdloc/errors.hpp"

namespace cdloc {

namespace {

constexpr double kDefiniteRatio = 1e-10;
constexpr double kNormalizedTolerance = 1e-8;

void require_positive_order(unsigned k) {
  if (k == 0) throw DomainError("localization order k must be >= 1");
}

Eigen::LLT<Matrix> factor(const BlockGram &gram) {
  Eigen::LLT<Matrix> llt(gram.h);
  if (llt.info() != Eigen::Success)
    throw NumericalError("block Gram matrix is not positive definite");
  return llt;
}

} // namespace

const Matrix &InvariantSet::at(const MultiIndex &i, const MultiIndex &j) const {
  auto it = entries.find({i, j});
  if (it == entries.end())
    throw DomainError("no invariant K^{" + i.to_string() + j.to_string() +
                      "} at order " + std::to_string(k));
  return it->second;
}

std::vector<std::pair<MultiIndex, MultiIndex>> InvariantSet::keys() const {
  std::vector<std::pair<MultiIndex, MultiIndex>> out;
  out.reserve(entries.size());
  for (std::size_t pi = 1; pi < ordering.size(); ++pi)
    for (std::size_t pj = 1; pj < ordering.size(); ++pj)
      out.emplace_back(ordering[pi], ordering[pj]);
  return out;
}

double InvariantSet::adjoint_defect() const {
  double worst = 0.0;
  for (const auto &[key, value] : entries) {
    const Matrix &mirror = at(key.second, key.first);
    worst = std::max(worst, (mirror - value.adjoint()).cwiseAbs().maxCoeff());
  }
  return worst;
}

Normalized normalize(const MatrixJet2 &jet) {
  const Matrix root = hermitian_sqrt(jet.at(0, 0));
  const HoloJet inverse = holo_invert(restrict_left(jet));
  const HoloJet scale = HoloJet::constant(root, jet.variables(), jet.order(),
                                          jet.basepoint());
  HoloJet frame = multiply(scale, inverse);
  MatrixJet2 out = sandwich(frame, jet, frame);
  return {std::move(out), std::move(frame)};
}

BlockGram build_block_gram(const MatrixJet2 &jet, unsigned k) {
  require_positive_order(k);
  if (jet.order() + 1 < k)
    throw ShapeError("build_block_gram: jet of order " +
                     std::to_string(jet.order()) +
                     " cannot support localization order " + std::to_string(k));
  BlockGram gram;
  gram.k = k;
  gram.m = jet.variables();
  gram.n = jet.rank();
  gram.ordering = IndexOrdering(gram.m, k - 1);
  const std::size_t l = gram.ordering.size();
  const std::size_t n = gram.n;
  gram.h = Matrix::Zero(n * l, n * l);
  // Graded ordering: positions below l coincide with the jet's own positions.
  for (std::size_t pi = 0; pi < l; ++pi)
    for (std::size_t pj = 0; pj < l; ++pj)
      gram.h.block(pi * n, pj * n, n, n) = jet.at(pi, pj);

  const double scale = std::max(1.0, gram.h.cwiseAbs().maxCoeff());
  if ((gram.h - gram.h.adjoint()).cwiseAbs().maxCoeff() > 1e-9 * scale)
    throw NumericalError("block Gram matrix is not Hermitian");
  gram.h = 0.5 * (gram.h + gram.h.adjoint()).eval();

  const Eigen::SelfAdjointEigenSolver<Matrix> eig(gram.h, Eigen::EigenvaluesOnly);
  const double lo = eig.eigenvalues().minCoeff();
  const double hi = eig.eigenvalues().maxCoeff();
  if (!(lo > kDefiniteRatio * hi))
    throw NumericalError(
        "block Gram matrix is degenerate or indefinite (min eigenvalue " +
        std::to_string(lo) + ", max " + std::to_string(hi) +
        "): not a valid frame jet at this point");
  return gram;
}

InvariantSet extract_invariants(const MatrixJet2 &jet, unsigned k) {
  const double tol = kNormalizedTolerance * std::max(1.0, jet.max_abs());
  if (!jet.is_normalized(tol))
    throw DomainError("extract_invariants: jet is not normalized (defect " +
                      std::to_string(jet.normalization_defect()) +
                      "); call normalize first");
  const BlockGram gram = build_block_gram(jet, k);
  if (!(condition_number(gram.h) <= kConditionLimit))
    throw NumericalError("extract_invariants: block Gram matrix condition "
                         "number exceeds 1e12");
  const Matrix g = factor(gram).solve(Matrix::Identity(gram.h.rows(), gram.h.cols()));

  InvariantSet out;
  out.basepoint = jet.basepoint();
  out.k = k;
  out.m = gram.m;
  out.n = gram.n;
  out.ordering = gram.ordering;
  const std::size_t n = gram.n;
  for (std::size_t pi = 1; pi < gram.blocks(); ++pi) {
    const MultiIndex &i = gram.ordering[pi];
    for (std::size_t pj = 1; pj < gram.blocks(); ++pj) {
      const MultiIndex &j = gram.ordering[pj];
      const double weight = double(factorial(i)) * double(factorial(j));
      out.entries[{i, j}] = weight * g.block(pj * n, pi * n, n, n);
    }
  }
  return out;
}

Matrix build_n_matrix(const MultiIndex &index, unsigned k, std::size_t m,
                      std::size_t n) {
  require_positive_order(k);
  if (index.size() != m)
    throw ShapeError("build_n_matrix: multi-index length differs from m");
  if (index.is_zero())
    throw DomainError("build_n_matrix: index must have degree >= 1");
  const IndexOrdering ord(m, k - 1);
  const std::size_t l = ord.size();
  Matrix out = Matrix::Zero(n * l, n * l);
  for (std::size_t pk = 0; pk < l; ++pk) {
    const MultiIndex &row = ord[pk];
    if (!geq(row, index)) continue;
    const std::size_t col = ord.position(sub(row, index));
    out.block(pk * n, col * n, n, n) =
        double(falling(row, index)) * Matrix::Identity(n, n);
  }
  return out;
}

Matrix adjoint_matrix(const Matrix &a, const BlockGram &gram) {
  if (a.rows() != gram.h.rows() || a.cols() != gram.h.cols())
    throw ShapeError("adjoint_matrix: size differs from Gram matrix");
  if (!(condition_number(gram.h) <= kConditionLimit))
    throw NumericalError("adjoint_matrix: Gram matrix is ill-conditioned");
  // H A^* H^{-1} = H (H^{-1} A)^* for Hermitian H.
  return gram.h * factor(gram).solve(a).adjoint();
}

Matrix compress_to_h1(const Matrix &a, const BlockGram &gram) {
  if (a.rows() != gram.h.rows() || a.cols() != gram.h.cols())
    throw ShapeError("compress_to_h1: size differs from Gram matrix");
  const std::size_t n = gram.n;
  const Matrix top = a.topRows(n) * gram.h.leftCols(n);
  const Matrix h00 = gram.h.topLeftCorner(n, n);
  // X (E H E^T)^{-1} = (H00^{-1} X^*)^* with H00 Hermitian.
  return h00.llt().solve(top.adjoint()).adjoint();
}

Matrix oracle_invariant(const MatrixJet2 &jet, unsigned k, const MultiIndex &i,
                        const MultiIndex &j) {
  if (i.is_zero() || j.is_zero())
    throw DomainError("oracle_invariant: indices must have degree >= 1");
  if (i.degree() + 1 > k || j.degree() + 1 > k)
    throw DomainError("oracle_invariant: index degree exceeds k - 1");
  const BlockGram gram = build_block_gram(jet, k);
  const Matrix a = build_n_matrix(i, k, gram.m, gram.n);
  const Matrix b = adjoint_matrix(build_n_matrix(j, k, gram.m, gram.n), gram);
  return compress_to_h1(b * a, gram);
}

InvariantSet oracle_invariants_direct(const MatrixJet2 &jet, unsigned k) {
  const BlockGram gram = build_block_gram(jet, k);
  InvariantSet out;
  out.basepoint = jet.basepoint();
  out.k = k;
  out.m = gram.m;
  out.n = gram.n;
  out.ordering = gram.ordering;

  std::vector<Matrix> forward(gram.blocks()), backward(gram.blocks());
  for (std::size_t p = 1; p < gram.blocks(); ++p) {
    forward[p] = build_n_matrix(gram.ordering[p], k, gram.m, gram.n);
    backward[p] = adjoint_matrix(forward[p], gram);
  }
  for (std::size_t pi = 1; pi < gram.blocks(); ++pi)
    for (std::size_t pj = 1; pj < gram.blocks(); ++pj)
      out.entries[{gram.ordering[pi], gram.ordering[pj]}] =
          compress_to_h1(backward[pj] * forward[pi], gram);
  return out;
}

} // namespace cdloc
