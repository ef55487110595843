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

#include "cdloc/errors.hpp"
#include "cdloc/specht.hpp"
#include "test_util.hpp"

using namespace cdloc;
using namespace cdloc::testing;

namespace {

Matrix mat2(Complex a, Complex b, Complex c, Complex d) {
  Matrix m(2, 2);
  m << a, b, c, d;
  return m;
}

MatrixTuple random_tuple(std::size_t p, std::size_t s, Rng &rng) {
  std::vector<Matrix> members;
  for (std::size_t i = 0; i < s; ++i) members.push_back(random_matrix(p, p, rng));
  return MatrixTuple(members);
}

// Word value by explicit multiplication, independent of the library's
// prefix products.
Complex naive_trace(const MatrixTuple &t, const TraceWord &w) {
  Matrix prod = Matrix::Identity(t.dimension(), t.dimension());
  for (const Letter &l : w.letters)
    prod = prod * (l.starred ? Matrix(t[l.member].adjoint()) : t[l.member]);
  return prod.trace();
}

} // namespace

TEST_CASE("trace word values") {
  const MatrixTuple one({Matrix::Constant(1, 1, 1.0)});
  CHECK(std::abs(trace_word_value(one, parse_word("a", one)) - 1.0) < 1e-15);

  const MatrixTuple id({Matrix::Identity(3, 3)});
  CHECK(std::abs(trace_word_value(id, parse_word("a a* a", id)) - 3.0) < 1e-15);

  const MatrixTuple t({mat2(1, 2, 0, 0)});
  CHECK(std::abs(trace_word_value(t, parse_word("a a*", t)) - 5.0) < 1e-15);

  CHECK_THROWS_AS(parse_word("a c", t), DomainError);
  CHECK_THROWS_AS(parse_word("", t), DomainError);
  CHECK(parse_word("a a*", t).to_string(t) == "a a*");
}

TEST_CASE("word enumeration") {
  CHECK(word_count(1, 2) == 6);
  CHECK(word_count(2, 1) == 4);
  CHECK(word_count(2, 3) == 4 + 16 + 64);

  const MatrixTuple t({mat2(1, 0, 0, 1)});
  const std::vector<TraceWord> words = enumerate_words(1, 2);
  REQUIRE(words.size() == 6);
  const char *expected[] = {"a", "a*", "a a", "a a*", "a* a", "a* a*"};
  for (std::size_t i = 0; i < 6; ++i) CHECK(words[i].to_string(t) == expected[i]);

  const MatrixTuple pair({mat2(1, 0, 0, 1), mat2(1, 0, 0, 1)});
  const std::vector<TraceWord> two = enumerate_words(2, 1);
  CHECK(two[2].to_string(pair) == "b");
  CHECK(two[3].to_string(pair) == "b*");
  CHECK(enumerate_words(3, 3).size() == word_count(3, 3));
}

TEST_CASE("trace values match explicit products") {
  Rng rng(31);
  const MatrixTuple t = random_tuple(3, 2, rng);
  for (const TraceWord &w : enumerate_words(2, 4))
    CHECK(std::abs(trace_word_value(t, w) - naive_trace(t, w)) < 1e-10);
}

TEST_CASE("a 2x2 matrix and its transpose are unitarily equivalent") {
  const Matrix a = mat2(1, 2, 0, 3);
  const EquivalenceVerdict v =
      specht_test(MatrixTuple({a}), MatrixTuple({Matrix(a.transpose())}));
  CHECK(v.status == Status::Equivalent);
  REQUIRE(v.certificate);
  CHECK(v.residual < 1e-6);
}

TEST_CASE("A versus 2A is separated by the word a a*") {
  const MatrixTuple a({mat2(0, 1, 0, 0)});
  const MatrixTuple b({mat2(0, 2, 0, 0)});
  const EquivalenceVerdict v = specht_test(a, b);
  CHECK(v.status == Status::Inequivalent);
  REQUIRE(v.witness);
  CHECK(v.witness_text == "a a*");
  CHECK(std::abs(v.witness_trace_a - 1.0) < 1e-15);
  CHECK(std::abs(v.witness_trace_b - 4.0) < 1e-15);
  CHECK_FALSE(find_certificate(a, b, 1e-6));

  // Length-one words agree and no certificate exists.
  SpechtOptions short_words;
  short_words.max_len = 1;
  const EquivalenceVerdict partial = specht_test(a, b, short_words);
  CHECK(partial.status == Status::Inconclusive);
  CHECK(partial.word_length_checked == 1);
}

TEST_CASE("permuted diagonals are equivalent") {
  const MatrixTuple a({mat2(1, 0, 0, 2)});
  const MatrixTuple b({mat2(2, 0, 0, 1)});
  const EquivalenceVerdict v = specht_test(a, b);
  CHECK(v.status == Status::Equivalent);
  CHECK(v.guarantee == Guarantee::Certificate);
  REQUIRE(v.certificate);
  CHECK(certificate_residual(a, b, *v.certificate) < 1e-10);
}

TEST_CASE("a tuple is equivalent to itself with the identity certificate") {
  Rng rng(32);
  const MatrixTuple t = random_tuple(3, 2, rng);
  const auto u = find_certificate(t, t, 1e-8);
  REQUIRE(u);
  CHECK((*u - Matrix::Identity(3, 3)).norm() < 1e-8);
  CHECK(intertwiner_basis(t, t, 1e-8).size() == 1);
}

TEST_CASE("trace words alone can certify equivalence") {
  // Scalars: the sufficiency bound is 2 and both length-one words agree.
  const MatrixTuple a({Matrix::Constant(1, 1, Complex(0.5, 0.25))});
  SpechtOptions opt;
  opt.certificate_retries = 0;
  const EquivalenceVerdict v = specht_test(a, a, opt);
  CHECK(v.status == Status::Equivalent);
  CHECK(v.sufficiency_bound == 2);
  CHECK(v.word_length_checked >= 2);
}

TEST_CASE("shape errors") {
  CHECK_THROWS_AS(MatrixTuple({Matrix::Identity(2, 2), Matrix::Identity(3, 3)}), ShapeError);
  CHECK_THROWS_AS(MatrixTuple({Matrix::Zero(2, 3)}), ShapeError);
  CHECK_THROWS_AS(specht_test(MatrixTuple({Matrix::Identity(2, 2)}),
                              MatrixTuple({Matrix::Identity(3, 3)})),
                  ShapeError);
}

TEST_CASE("random conjugates are recognized") {
  Rng rng(33);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t p = 1 + trial % 4, s = 1 + trial % 3;
    const MatrixTuple t = random_tuple(p, s, rng);
    const Matrix u = random_unitary(p, rng);
    const MatrixTuple c = conjugate(t, u);
    for (const TraceWord &w : enumerate_words(s, 3))
      CHECK(std::abs(trace_word_value(t, w) - trace_word_value(c, w)) <
            1e-9 * std::pow(std::max(1.0, t.max_norm()), double(w.length())));
    const EquivalenceVerdict v = specht_test(t, c);
    CHECK(v.status == Status::Equivalent);
    REQUIRE(v.certificate);
    CHECK(certificate_residual(t, c, *v.certificate) < 1e-6);
  }
}

TEST_CASE("unrelated random tuples are inequivalent") {
  Rng rng(34);
  for (int trial = 0; trial < 10; ++trial) {
    const MatrixTuple a = random_tuple(3, 2, rng), b = random_tuple(3, 2, rng);
    const EquivalenceVerdict v = specht_test(a, b);
    CHECK(v.status == Status::Inequivalent);
    REQUIRE(v.witness);
    CHECK(std::abs(naive_trace(a, *v.witness) - naive_trace(b, *v.witness)) > 1e-8);
  }
}
