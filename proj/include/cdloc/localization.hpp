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

// Localization invariants.
//
// For a frame gamma normalized at z, the k-th order localization H_z^k is
// spanned by {d^K gamma_i(z) : |K| <= k-1}. Its Gram matrix H has blocks
// H_{IJ} = d^I dbar^J H_00, and the compression of N^I (N^J)^* to H_z^1
// (N^I = (T - z)^I restricted to H_z^k) is represented in the basis gamma(z)
// by I! J! G_{JI} with G = H^{-1}.
//
// Matrices of linear maps follow the left-action convention: A represents
// Phi when Phi v_a = sum_b A_{ab} v_b, so Phi Psi is represented by B A.

#pragma once

#include <map>
#include <utility>

#include "cdloc/jets.hpp"

namespace cdloc {

struct BlockGram {
  unsigned k = 0;
  std::size_t m = 0;
  std::size_t n = 0;
  /// Multi-indices with |K| <= k - 1; block (sigma(I), sigma(J)) = H_{IJ}.
  IndexOrdering ordering;
  Matrix h;

  std::size_t blocks() const { return ordering.size(); }
  Matrix block(std::size_t pi, std::size_t pj) const {
    return h.block(pi * n, pj * n, n, n);
  }
};

/// Matrices M^{IJ} of K_z^{IJ}, 1 <= |I|,|J| <= k-1, in the normalized frame
/// basis of H_z^1.
struct InvariantSet {
  Point basepoint;
  unsigned k = 0;
  std::size_t m = 0;
  std::size_t n = 0;
  /// Ordering of degree k - 1; keys below index into it.
  IndexOrdering ordering;
  std::map<std::pair<MultiIndex, MultiIndex>, Matrix> entries;

  const Matrix &at(const MultiIndex &i, const MultiIndex &j) const;
  /// Members in the shared (I, J) order: I-major over the nonzero indices of
  /// the ordering, then J.
  std::vector<std::pair<MultiIndex, MultiIndex>> keys() const;
  /// max |M^{JI} - (M^{IJ})^*|.
  double adjoint_defect() const;
};

struct Normalized {
  MatrixJet2 jet;
  /// Frame change Phi with jet = sandwich(Phi, input, Phi).
  HoloJet frame;
};

/// Frame normalized at the basepoint: Phi(z) = D00^{1/2} K(z, z0)^{-1}.
Normalized normalize(const MatrixJet2 &jet);

/// Block Gram matrix of {d^K gamma : |K| <= k-1}; validates Hermitian
/// positive definiteness (min eigenvalue > 1e-10 max eigenvalue).
BlockGram build_block_gram(const MatrixJet2 &jet, unsigned k);

/// M^{IJ} = I! J! G_{JI}. Requires a normalized jet (to 1e-8) and a
/// well-conditioned block Gram matrix (condition number <= 1e12).
InvariantSet extract_invariants(const MatrixJet2 &jet, unsigned k);

/// Matrix of N^I on H_z^k in the jet basis: block (sigma(K), sigma(K - I)) is
/// K!/(K-I)! I_n for K >= I.
Matrix build_n_matrix(const MultiIndex &index, unsigned k, std::size_t m,
                      std::size_t n);

/// Matrix of the adjoint map: H A^* H^{-1}.
Matrix adjoint_matrix(const Matrix &a, const BlockGram &gram);

/// P_{H^1} X restricted to H^1 in the basis of the first block:
/// E A H E^T (E H E^T)^{-1}.
Matrix compress_to_h1(const Matrix &a, const BlockGram &gram);

/// Independent route through explicit operator matrices: for each (I, J) the
/// composition N^I (N^J)^* is represented by B A with A = N^I and
/// B = adjoint_matrix(N^J), then compressed to H^1.
InvariantSet oracle_invariants_direct(const MatrixJet2 &jet, unsigned k);

/// Entry (I, J) of the direct route alone; |I|, |J| >= 1 required.
Matrix oracle_invariant(const MatrixJet2 &jet, unsigned k, const MultiIndex &i,
                        const MultiIndex &j);

} // namespace cdloc
