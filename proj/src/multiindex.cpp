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

#include "cdloc/multiindex.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "cdloc/errors.hpp"

namespace cdloc {

namespace {

std::uint64_t scalar_factorial(unsigned k) {
  std::uint64_t r = 1;
  for (unsigned i = 2; i <= k; ++i) r *= i;
  return r;
}

void require_same_length(const MultiIndex &a, const MultiIndex &b) {
  if (a.size() != b.size())
    throw ShapeError("multi-index length mismatch: " + a.to_string() +
                     " vs " + b.to_string());
}

} // namespace

MultiIndex MultiIndex::unit(std::size_t m, std::size_t i) {
  MultiIndex e(m);
  e.entries_.at(i) = 1;
  return e;
}

unsigned MultiIndex::degree() const {
  return std::accumulate(entries_.begin(), entries_.end(), 0u);
}

std::string MultiIndex::to_string() const {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (i) os << ',';
    os << entries_[i];
  }
  os << ')';
  return os.str();
}

MultiIndex operator+(const MultiIndex &a, const MultiIndex &b) {
  require_same_length(a, b);
  MultiIndex r = a;
  for (std::size_t i = 0; i < a.size(); ++i) r.entries_[i] += b.entries_[i];
  return r;
}

std::uint64_t factorial(const MultiIndex &index) {
  std::uint64_t r = 1;
  for (unsigned e : index.entries()) r *= scalar_factorial(e);
  return r;
}

bool geq(const MultiIndex &a, const MultiIndex &b) {
  require_same_length(a, b);
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] < b[i]) return false;
  return true;
}

MultiIndex sub(const MultiIndex &a, const MultiIndex &b) {
  if (!geq(a, b))
    throw DomainError("sub: " + a.to_string() + " is not >= " +
                      b.to_string());
  MultiIndex r = a;
  for (std::size_t i = 0; i < a.size(); ++i) r[i] -= b[i];
  return r;
}

std::uint64_t falling(const MultiIndex &upper, const MultiIndex &lower) {
  if (!geq(upper, lower)) return 0;
  std::uint64_t r = 1;
  for (std::size_t i = 0; i < upper.size(); ++i)
    for (unsigned k = upper[i] - lower[i] + 1; k <= upper[i]; ++k) r *= k;
  return r;
}

std::uint64_t binomial(const MultiIndex &upper, const MultiIndex &lower) {
  if (!geq(upper, lower)) return 0;
  std::uint64_t r = 1;
  for (std::size_t i = 0; i < upper.size(); ++i) {
    // C(n, k) built incrementally stays integral at every step.
    const unsigned n = upper[i];
    const unsigned k = std::min(lower[i], n - lower[i]);
    std::uint64_t c = 1;
    for (unsigned j = 1; j <= k; ++j) c = c * (n - k + j) / j;
    r *= c;
  }
  return r;
}

std::size_t count_up_to_degree(std::size_t m, unsigned d) {
  // C(m+d, m)
  std::uint64_t c = 1;
  for (std::size_t j = 1; j <= m; ++j) c = c * (d + j) / j;
  return static_cast<std::size_t>(c);
}

IndexOrdering::IndexOrdering(std::size_t m, unsigned d) : m_(m), d_(d) {
  if (m == 0) throw DomainError("IndexOrdering: need at least one variable");
  indices_.reserve(count_up_to_degree(m, d));
  for (unsigned degree = 0; degree <= d; ++degree) {
    // Compositions of the degree into m parts, generated in lexicographic
    // order: leading slots vary slowest, the last slot takes the remainder.
    std::vector<MultiIndex> level;
    MultiIndex current(m);
    auto emit = [&](auto &&self, std::size_t slot, unsigned remaining) -> void {
      if (slot + 1 == m) {
        current[slot] = remaining;
        level.push_back(current);
        return;
      }
      for (unsigned v = 0; v <= remaining; ++v) {
        current[slot] = v;
        self(self, slot + 1, remaining - v);
      }
    };
    emit(emit, 0, degree);
    indices_.insert(indices_.end(), level.begin(), level.end());
  }
  for (std::size_t i = 0; i < indices_.size(); ++i) position_[indices_[i]] = i;
}

std::size_t IndexOrdering::position(const MultiIndex &index) const {
  auto it = position_.find(index);
  if (it == position_.end())
    throw DomainError("multi-index " + index.to_string() +
                      " outside ordering of degree " + std::to_string(d_));
  return it->second;
}

bool IndexOrdering::contains(const MultiIndex &index) const {
  return position_.count(index) != 0;
}

std::vector<std::size_t> IndexOrdering::positions_with_degree(unsigned lo,
                                                              unsigned hi) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < indices_.size(); ++i) {
    const unsigned deg = indices_[i].degree();
    if (deg >= lo && deg <= hi) out.push_back(i);
  }
  return out;
}

IndexOrdering enumerate(std::size_t m, unsigned d) { return IndexOrdering(m, d); }

} // namespace cdloc
