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

#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <string>
#include <vector>

namespace cdloc {

/// Exponent tuple (i_1, ..., i_m) addressing the partial derivative
/// d^I = d_1^{i_1} ... d_m^{i_m} or the operator power (T - z)^I.
class MultiIndex {
public:
  MultiIndex() = default;
  explicit MultiIndex(std::size_t m) : entries_(m, 0) {}
  MultiIndex(std::initializer_list<unsigned> entries) : entries_(entries) {}
  explicit MultiIndex(std::vector<unsigned> entries)
      : entries_(std::move(entries)) {}

  static MultiIndex zero(std::size_t m) { return MultiIndex(m); }
  /// Unit index e_i of length m.
  static MultiIndex unit(std::size_t m, std::size_t i);

  std::size_t size() const { return entries_.size(); }
  unsigned operator[](std::size_t i) const { return entries_[i]; }
  unsigned &operator[](std::size_t i) { return entries_[i]; }
  const std::vector<unsigned> &entries() const { return entries_; }

  /// |I| = i_1 + ... + i_m.
  unsigned degree() const;
  bool is_zero() const { return degree() == 0; }

  std::string to_string() const;

  friend MultiIndex operator+(const MultiIndex &a, const MultiIndex &b);

  friend bool operator==(const MultiIndex &, const MultiIndex &) = default;
  friend auto operator<=>(const MultiIndex &, const MultiIndex &) = default;

private:
  std::vector<unsigned> entries_;
};

/// I! = i_1! ... i_m!
std::uint64_t factorial(const MultiIndex &index);

/// Componentwise I >= J.
bool geq(const MultiIndex &a, const MultiIndex &b);

/// I - J; throws DomainError unless geq(I, J).
MultiIndex sub(const MultiIndex &a, const MultiIndex &b);

/// J!/(J-I)! when J >= I, otherwise 0.
std::uint64_t falling(const MultiIndex &upper, const MultiIndex &lower);

/// Multinomial-free product of binomials prod_k C(i_k, a_k); 0 unless I >= A.
std::uint64_t binomial(const MultiIndex &upper, const MultiIndex &lower);

/// Number of multi-indices of length m with degree <= d, i.e. C(m+d, m).
std::size_t count_up_to_degree(std::size_t m, unsigned d);

/// All multi-indices of length m with |K| <= d in graded-lex order together
/// with the position map sigma. sigma(0,...,0) == 0.
class IndexOrdering {
public:
  IndexOrdering() = default;
  IndexOrdering(std::size_t m, unsigned d);

  std::size_t variables() const { return m_; }
  unsigned max_degree() const { return d_; }
  /// L = C(m+d, m).
  std::size_t size() const { return indices_.size(); }

  const MultiIndex &operator[](std::size_t pos) const { return indices_[pos]; }
  const std::vector<MultiIndex> &indices() const { return indices_; }

  /// sigma(I); throws DomainError if I is not in the set.
  std::size_t position(const MultiIndex &index) const;
  bool contains(const MultiIndex &index) const;

  /// Positions of all indices with degree in [lo, hi].
  std::vector<std::size_t> positions_with_degree(unsigned lo,
                                                 unsigned hi) const;

  auto begin() const { return indices_.begin(); }
  auto end() const { return indices_.end(); }

private:
  std::size_t m_ = 0;
  unsigned d_ = 0;
  std::vector<MultiIndex> indices_;
  std::map<MultiIndex, std::size_t> position_;
};

/// Equivalent to IndexOrdering(m, d).
IndexOrdering enumerate(std::size_t m, unsigned d);

} // namespace cdloc
