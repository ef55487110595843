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

// Joint unitary equivalence of matrix tuples.
//
// Two tuples (A_1..A_s), (B_1..B_s) are jointly unitarily equivalent iff
// tr w(A, A^*) = tr w(B, B^*) for every word w in the 2s letters A_a, A_a^*.
// Words are enumerated by length; a constructive certificate U with
// U A_a U^* = B_a is searched for in the joint intertwiner space.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cdloc/jets.hpp"

namespace cdloc {

class MatrixTuple {
public:
  MatrixTuple() = default;
  /// Labels default to "a", "b", ... ("m0", "m1", ... beyond 26 members).
  explicit MatrixTuple(std::vector<Matrix> members,
                       std::vector<std::string> labels = {});

  std::size_t dimension() const { return p_; }
  std::size_t size() const { return members_.size(); }
  const Matrix &operator[](std::size_t i) const { return members_[i]; }
  const std::vector<Matrix> &members() const { return members_; }
  const std::vector<std::string> &labels() const { return labels_; }

  /// Largest operator 2-norm over the members.
  double max_norm() const;

private:
  std::size_t p_ = 0;
  std::vector<Matrix> members_;
  std::vector<std::string> labels_;
};

/// (U A_1 U^*, ..., U A_s U^*).
MatrixTuple conjugate(const MatrixTuple &t, const Matrix &u);

struct Letter {
  std::size_t member = 0;
  bool starred = false;
  friend bool operator==(const Letter &, const Letter &) = default;
};

struct TraceWord {
  std::vector<Letter> letters;

  std::size_t length() const { return letters.size(); }
  /// Space-separated letters, e.g. "a a*".
  std::string to_string(const MatrixTuple &t) const;
  friend bool operator==(const TraceWord &, const TraceWord &) = default;
};

/// Parses "a a* b" against the tuple's labels; throws DomainError.
TraceWord parse_word(const std::string &text, const MatrixTuple &t);

/// tr of the ordered product of the designated members/adjoints.
Complex trace_word_value(const MatrixTuple &t, const TraceWord &w);

/// All words of length 1..max_len in length-then-lexicographic order, with
/// letters ordered (member 0, plain), (member 0, starred), (member 1, ...).
std::vector<TraceWord> enumerate_words(std::size_t members, std::size_t max_len);

/// sum_{j=1..len} (2s)^j.
std::uint64_t word_count(std::size_t members, std::size_t max_len);

enum class Status { Equivalent, Inequivalent, Inconclusive };
std::string to_string(Status s);

/// Which argument backs an Equivalent verdict.
enum class Guarantee { None, Certificate, TraceWords };
std::string to_string(Guarantee g);

struct EquivalenceVerdict {
  Status status = Status::Inconclusive;
  Guarantee guarantee = Guarantee::None;
  /// U with U A_a U^* ~ B_a.
  std::optional<Matrix> certificate;
  /// max_a ||U A_a U^* - B_a||_F for the certificate.
  double residual = 0.0;
  std::optional<TraceWord> witness;
  std::string witness_text;
  Complex witness_trace_a = 0.0;
  Complex witness_trace_b = 0.0;
  /// Words compared and the longest length fully covered.
  std::uint64_t words_checked = 0;
  std::size_t word_length_checked = 0;
  /// Word length treated as sufficient for a trace-only Equivalent verdict.
  std::size_t sufficiency_bound = 0;
  std::string reason;
};

struct SpechtOptions {
  /// Longest word; 0 selects the sufficiency bound.
  std::size_t max_len = 0;
  /// Trace tolerance for length-one words; scaled by
  /// max(1, max operator norm)^len for longer words.
  double tolerance = 1e-8;
  /// Certificate residual tolerance.
  double certificate_tolerance = 1e-6;
  /// 0 selects 2 p^2.
  std::size_t sufficiency_bound = 0;
  /// Cap on the number of words enumerated; only complete lengths count
  /// towards the sufficiency bound.
  std::uint64_t word_budget = 200000;
  std::uint64_t seed = 0;
  int certificate_retries = 32;
};

/// 2 p^2.
std::size_t default_sufficiency_bound(std::size_t p);

EquivalenceVerdict specht_test(const MatrixTuple &a, const MatrixTuple &b,
                               const SpechtOptions &options = {});

/// Orthonormal basis (Frobenius) of {S : S A_a = B_a S, S A_a^* = B_a^* S}.
std::vector<Matrix> intertwiner_basis(const MatrixTuple &a, const MatrixTuple &b,
                                      double tolerance);

/// Unitary U with max_a ||U A_a U^* - B_a||_F <= tol, or nothing. The first
/// candidate is the polar factor of the projection of the identity onto the
/// intertwiner space; further candidates use seeded random combinations.
std::optional<Matrix> find_certificate(const MatrixTuple &a, const MatrixTuple &b,
                                       double tol, std::uint64_t seed = 0,
                                       int retries = 32);

/// max_a ||U A_a U^* - B_a||_F.
double certificate_residual(const MatrixTuple &a, const MatrixTuple &b,
                            const Matrix &u);

} // namespace cdloc
