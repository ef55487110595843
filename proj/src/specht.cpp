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

#include "cdloc/specht.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include <Eigen/SVD>

#include "cdloc/errors.hpp"

namespace cdloc {

namespace {

std::string default_label(std::size_t i, std::size_t total) {
  if (total <= 26) return std::string(1, char('a' + i));
  return "m" + std::to_string(i);
}

void require_comparable(const MatrixTuple &a, const MatrixTuple &b) {
  if (a.dimension() != b.dimension() || a.size() != b.size())
    throw ShapeError("tuples differ in dimension or member count: " +
                     std::to_string(a.size()) + "x" +
                     std::to_string(a.dimension()) + " vs " +
                     std::to_string(b.size()) + "x" +
                     std::to_string(b.dimension()));
}

const Matrix &letter_matrix(const MatrixTuple &t, const std::vector<Matrix> &adjoints,
                            const Letter &l) {
  return l.starred ? adjoints[l.member] : t[l.member];
}

std::vector<Matrix> adjoints_of(const MatrixTuple &t) {
  std::vector<Matrix> out;
  out.reserve(t.size());
  for (const Matrix &m : t.members()) out.push_back(m.adjoint());
  return out;
}

// vec(S X) = (X^T (x) I) vec(S), vec(Y S) = (I (x) Y) vec(S), column-major vec.
Matrix intertwining_operator(const Matrix &x, const Matrix &y) {
  const Eigen::Index p = x.rows();
  Matrix out = Matrix::Zero(p * p, p * p);
  for (Eigen::Index r = 0; r < p; ++r)
    for (Eigen::Index c = 0; c < p; ++c) {
      out.block(r * p, c * p, p, p).diagonal().array() += x(c, r);
      if (r == c) out.block(r * p, c * p, p, p) -= y;
    }
  return out;
}

std::optional<Matrix> unitary_polar_factor(const Matrix &s) {
  const Eigen::JacobiSVD<Matrix> svd(s, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto &sv = svd.singularValues();
  if (!(sv(sv.size() - 1) > 1e-8 * sv(0))) return std::nullopt;
  return Matrix(svd.matrixU() * svd.matrixV().adjoint());
}

} // namespace

MatrixTuple::MatrixTuple(std::vector<Matrix> members,
                         std::vector<std::string> labels)
    : members_(std::move(members)), labels_(std::move(labels)) {
  if (!members_.empty()) p_ = members_.front().rows();
  for (const Matrix &m : members_)
    if (m.rows() != Eigen::Index(p_) || m.cols() != Eigen::Index(p_))
      throw ShapeError("MatrixTuple: members must be square of equal size");
  if (labels_.empty())
    for (std::size_t i = 0; i < members_.size(); ++i)
      labels_.push_back(default_label(i, members_.size()));
  if (labels_.size() != members_.size())
    throw ShapeError("MatrixTuple: label count differs from member count");
}

double MatrixTuple::max_norm() const {
  double worst = 0.0;
  for (const Matrix &m : members_) {
    if (m.size() == 0) continue;
    const Eigen::JacobiSVD<Matrix> svd(m);
    worst = std::max(worst, svd.singularValues()(0));
  }
  return worst;
}

MatrixTuple conjugate(const MatrixTuple &t, const Matrix &u) {
  std::vector<Matrix> out;
  out.reserve(t.size());
  for (const Matrix &m : t.members()) out.push_back(u * m * u.adjoint());
  return MatrixTuple(std::move(out), t.labels());
}

std::string TraceWord::to_string(const MatrixTuple &t) const {
  std::ostringstream os;
  for (std::size_t i = 0; i < letters.size(); ++i) {
    if (i) os << ' ';
    os << t.labels().at(letters[i].member) << (letters[i].starred ? "*" : "");
  }
  return os.str();
}

TraceWord parse_word(const std::string &text, const MatrixTuple &t) {
  TraceWord w;
  std::istringstream is(text);
  std::string token;
  while (is >> token) {
    Letter l;
    if (!token.empty() && token.back() == '*') {
      l.starred = true;
      token.pop_back();
    }
    const auto &labels = t.labels();
    auto it = std::find(labels.begin(), labels.end(), token);
    if (it == labels.end())
      throw DomainError("parse_word: unknown member label '" + token + "'");
    l.member = std::size_t(it - labels.begin());
    w.letters.push_back(l);
  }
  if (w.letters.empty()) throw DomainError("parse_word: empty word");
  return w;
}

Complex trace_word_value(const MatrixTuple &t, const TraceWord &w) {
  if (w.letters.empty()) throw DomainError("trace_word_value: empty word");
  Matrix product = Matrix::Identity(t.dimension(), t.dimension());
  for (const Letter &l : w.letters) {
    if (l.member >= t.size())
      throw DomainError("trace_word_value: member index out of range");
    product = product * (l.starred ? Matrix(t[l.member].adjoint()) : t[l.member]);
  }
  return product.trace();
}

std::vector<TraceWord> enumerate_words(std::size_t members, std::size_t max_len) {
  std::vector<TraceWord> out;
  const std::size_t alphabet = 2 * members;
  if (alphabet == 0) return out;
  for (std::size_t len = 1; len <= max_len; ++len) {
    std::vector<std::size_t> digits(len, 0);
    while (true) {
      TraceWord w;
      for (std::size_t d : digits) w.letters.push_back({d / 2, d % 2 == 1});
      out.push_back(std::move(w));
      std::size_t pos = len;
      while (pos > 0 && ++digits[pos - 1] == alphabet) digits[--pos] = 0;
      if (pos == 0) break;
    }
  }
  return out;
}

std::uint64_t word_count(std::size_t members, std::size_t max_len) {
  std::uint64_t total = 0, level = 1;
  for (std::size_t j = 1; j <= max_len; ++j) {
    level *= 2 * members;
    total += level;
  }
  return total;
}

std::string to_string(Status s) {
  switch (s) {
  case Status::Equivalent: return "Equivalent";
  case Status::Inequivalent: return "Inequivalent";
  case Status::Inconclusive: return "Inconclusive";
  }
  return "?";
}

std::string to_string(Guarantee g) {
  switch (g) {
  case Guarantee::None: return "none";
  case Guarantee::Certificate: return "certificate";
  case Guarantee::TraceWords: return "trace-words";
  }
  return "?";
}

std::size_t default_sufficiency_bound(std::size_t p) { return 2 * p * p; }

double certificate_residual(const MatrixTuple &a, const MatrixTuple &b,
                            const Matrix &u) {
  require_comparable(a, b);
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    worst = std::max(worst, (u * a[i] * u.adjoint() - b[i]).norm());
  return worst;
}

std::vector<Matrix> intertwiner_basis(const MatrixTuple &a, const MatrixTuple &b,
                                      double tolerance) {
  require_comparable(a, b);
  const Eigen::Index p = a.dimension();
  const Eigen::Index rows = std::max<Eigen::Index>(1, 2 * a.size()) * p * p;
  Matrix system = Matrix::Zero(rows, p * p);
  for (std::size_t i = 0; i < a.size(); ++i) {
    system.middleRows(2 * i * p * p, p * p) = intertwining_operator(a[i], b[i]);
    system.middleRows((2 * i + 1) * p * p, p * p) =
        intertwining_operator(a[i].adjoint(), b[i].adjoint());
  }
  const Eigen::JacobiSVD<Matrix> svd(system, Eigen::ComputeFullV);
  const auto &sv = svd.singularValues();
  const double threshold = tolerance * std::max(1.0, sv.size() ? sv(0) : 0.0);
  std::vector<Matrix> basis;
  for (Eigen::Index c = 0; c < p * p; ++c) {
    if (c < sv.size() && sv(c) > threshold) continue;
    basis.push_back(Eigen::Map<const Matrix>(svd.matrixV().col(c).data(), p, p));
  }
  return basis;
}

std::optional<Matrix> find_certificate(const MatrixTuple &a, const MatrixTuple &b,
                                       double tol, std::uint64_t seed,
                                       int retries) {
  require_comparable(a, b);
  const std::size_t p = a.dimension();
  const std::vector<Matrix> basis = intertwiner_basis(a, b, 1e-2 * tol);
  if (basis.empty()) return std::nullopt;

  auto accept = [&](const Matrix &s) -> std::optional<Matrix> {
    auto u = unitary_polar_factor(s);
    if (!u) return std::nullopt;
    const double unitarity = (u->adjoint() * *u - Matrix::Identity(p, p)).norm();
    if (unitarity > 1e-10) return std::nullopt;
    if (certificate_residual(a, b, *u) > tol) return std::nullopt;
    return u;
  };

  // Projection of the identity first: returns U = I whenever the tuples agree.
  Matrix s = Matrix::Zero(p, p);
  for (const Matrix &n : basis) s += std::conj(n.trace()) * n;
  if (auto u = accept(s)) return u;

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  for (int attempt = 0; attempt < retries; ++attempt) {
    s.setZero();
    for (const Matrix &n : basis) s += Complex(gauss(rng), gauss(rng)) * n;
    if (auto u = accept(s)) return u;
  }
  return std::nullopt;
}

EquivalenceVerdict specht_test(const MatrixTuple &a, const MatrixTuple &b,
                               const SpechtOptions &options) {
  require_comparable(a, b);
  EquivalenceVerdict verdict;
  const std::size_t p = a.dimension();
  const std::size_t s = a.size();
  verdict.sufficiency_bound = options.sufficiency_bound
                                  ? options.sufficiency_bound
                                  : default_sufficiency_bound(p);
  const std::size_t max_len = options.max_len ? options.max_len : verdict.sufficiency_bound;
  const double growth = std::max({1.0, a.max_norm(), b.max_norm()});

  const std::vector<Matrix> adj_a = adjoints_of(a), adj_b = adjoints_of(b);
  const std::size_t alphabet = 2 * s;

  // Depth-first over each length with prefix products, so every word costs
  // one matrix product per tuple.
  for (std::size_t len = 1; len <= max_len && alphabet > 0; ++len) {
    const std::uint64_t level = word_count(s, len) - word_count(s, len - 1);
    if (verdict.words_checked + level > options.word_budget) break;
    const double tol = options.tolerance * std::pow(growth, double(len));
    std::vector<std::size_t> digits(len, 0);
    std::vector<Matrix> prefix_a(len + 1, Matrix::Identity(p, p));
    std::vector<Matrix> prefix_b(len + 1, Matrix::Identity(p, p));
    std::size_t valid = 0; // prefix products [0, valid] are current
    while (true) {
      for (std::size_t k = valid; k < len; ++k) {
        const Letter l{digits[k] / 2, digits[k] % 2 == 1};
        prefix_a[k + 1] = prefix_a[k] * letter_matrix(a, adj_a, l);
        prefix_b[k + 1] = prefix_b[k] * letter_matrix(b, adj_b, l);
      }
      ++verdict.words_checked;
      const Complex ta = prefix_a[len].trace();
      const Complex tb = prefix_b[len].trace();
      if (std::abs(ta - tb) > tol) {
        TraceWord w;
        for (std::size_t d : digits) w.letters.push_back({d / 2, d % 2 == 1});
        verdict.status = Status::Inequivalent;
        verdict.witness_text = w.to_string(a);
        verdict.witness = std::move(w);
        verdict.witness_trace_a = ta;
        verdict.witness_trace_b = tb;
        verdict.word_length_checked = len - 1;
        std::ostringstream os;
        os << "trace of word '" << verdict.witness_text << "' differs: |"
           << ta << " - " << tb << "| > " << tol;
        verdict.reason = os.str();
        return verdict;
      }
      std::size_t pos = len;
      while (pos > 0 && ++digits[pos - 1] == alphabet) digits[--pos] = 0;
      if (pos == 0) break;
      valid = pos - 1;
    }
    verdict.word_length_checked = len;
  }

  const bool words_sufficient =
      verdict.word_length_checked >= verdict.sufficiency_bound || alphabet == 0;
  if (auto u = find_certificate(a, b, options.certificate_tolerance, options.seed,
                                options.certificate_retries)) {
    verdict.status = Status::Equivalent;
    verdict.guarantee = Guarantee::Certificate;
    verdict.residual = certificate_residual(a, b, *u);
    verdict.certificate = std::move(u);
    std::ostringstream os;
    os << "unitary certificate with residual " << verdict.residual
       << "; trace words agree up to length " << verdict.word_length_checked
       << " (sufficiency bound " << verdict.sufficiency_bound << ")";
    verdict.reason = os.str();
    return verdict;
  }
  if (words_sufficient) {
    verdict.status = Status::Equivalent;
    verdict.guarantee = Guarantee::TraceWords;
    verdict.reason = "all trace words up to length " +
                     std::to_string(verdict.word_length_checked) +
                     " agree (sufficiency bound " +
                     std::to_string(verdict.sufficiency_bound) +
                     "); no certificate found within the retry budget";
    return verdict;
  }
  verdict.status = Status::Inconclusive;
  verdict.reason = "trace words agree up to length " +
                   std::to_string(verdict.word_length_checked) +
                   " but the sufficiency bound " +
                   std::to_string(verdict.sufficiency_bound) +
                   " was not reached and no certificate was found";
  return verdict;
}

} // namespace cdloc
