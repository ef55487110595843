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

#include <stdexcept>
#include <string>

namespace cdloc {

/// Argument outside the mathematical domain of an operation
/// (non-comparable multi-indices, basepoint outside the kernel's domain, ...).
class DomainError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

/// Inconsistent shapes: variable count, bundle rank, jet order or basepoint.
class ShapeError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Singular, indefinite or ill-conditioned data where a well-posed
/// factorization was required.
class NumericalError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

} // namespace cdloc
