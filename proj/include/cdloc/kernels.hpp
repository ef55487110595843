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

// Reproducing-kernel models. A model is an immutable descriptor of a Gram
// kernel K(z, w) = <gamma^T(z), gamma(w)> of a holomorphic frame; the
// operator tuple itself (adjoints of the coordinate multipliers) is never
// materialized, only the jets of K.

#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "cdloc/jets.hpp"

namespace cdloc {

class KernelModel;
using ModelPtr = std::shared_ptr<const KernelModel>;

/// prod_i (1 - z_i conj(w_i))^{-weights_i} on the unit polydisc, rank 1.
struct ProductPolydisc {
  std::vector<double> weights;
};

/// (1 - <z, w>)^{-weight} on the unit ball of C^m, rank 1.
struct BallKernel {
  std::size_t m = 1;
  double weight = 1.0;
};

/// sum_{P,Q} A[P][Q] z^P conj(w)^Q with A[Q][P] = A[P][Q]^*; entire.
struct PowerSeries {
  std::size_t m = 1;
  std::size_t n = 1;
  std::map<std::pair<MultiIndex, MultiIndex>, Matrix> terms;
};

/// Block-diagonal kernel diag(K_first, K_second).
struct DirectSum {
  ModelPtr first;
  ModelPtr second;
};

/// Phi(z) K(z, w) Phi(w)^*, Phi given by a (polynomial) holomorphic jet.
/// A constant Phi0 is an order-0 jet.
struct ConjugateBy {
  ModelPtr inner;
  HoloJet transform;
};

/// factor * K(z, w), factor > 0.
struct Scale {
  ModelPtr inner;
  double factor = 1.0;
};

/// User-supplied closed form. Jets are obtained by Cauchy quadrature.
struct CustomKernel {
  using Evaluator = std::function<Matrix(std::span<const Complex> z,
                                         std::span<const Complex> w)>;
  /// Distance from a point to the boundary of the domain (<= 0 outside).
  using BoundaryDistance = std::function<double(std::span<const Complex> z)>;
  std::size_t m = 1;
  std::size_t n = 1;
  std::string label = "custom";
  Evaluator evaluate;
  BoundaryDistance boundary_distance;
};

class KernelModel {
public:
  using Variant = std::variant<ProductPolydisc, BallKernel, PowerSeries,
                               DirectSum, ConjugateBy, Scale, CustomKernel>;

  explicit KernelModel(Variant v);

  const Variant &variant() const { return variant_; }
  /// Number of complex variables m.
  std::size_t variables() const { return m_; }
  /// Bundle rank n.
  std::size_t rank() const { return n_; }
  /// Short human-readable description, nested for composites.
  std::string describe() const;

private:
  Variant variant_;
  std::size_t m_ = 0;
  std::size_t n_ = 0;
};

// Factories. All validate their arguments and throw DomainError/ShapeError.
ModelPtr product_polydisc(std::vector<double> weights);
/// Hardy space of the polydisc: all weights 1.
ModelPtr szego(std::size_t m = 1);
/// Bergman space of the polydisc: all weights 2.
ModelPtr bergman(std::size_t m = 1);
ModelPtr ball(std::size_t m, double weight);
ModelPtr power_series(std::size_t m, std::size_t n,
                      std::map<std::pair<MultiIndex, MultiIndex>, Matrix> terms);
ModelPtr direct_sum(ModelPtr a, ModelPtr b);
/// Frame change by a constant invertible matrix.
ModelPtr transform(ModelPtr model, const Matrix &phi0);
/// Frame change by the Taylor polynomial of a holomorphic jet.
ModelPtr transform(ModelPtr model, HoloJet phi);
ModelPtr scale(ModelPtr model, double factor);
ModelPtr custom(CustomKernel kernel);

/// Distance from z to the boundary of the model's domain; +infinity for
/// entire kernels, <= 0 outside the domain.
double boundary_distance(const KernelModel &model, const Point &z);
bool contains(const KernelModel &model, const Point &z);

/// K(z, w) from the closed form.
Matrix evaluate(const KernelModel &model, const Point &z, const Point &w);

/// Exact jet d^I dbar^J K(z0, z0), |I|,|J| <= d. Closed-form recursions for
/// polydisc/ball kernels, termwise differentiation for power series,
/// Leibniz-rule jet arithmetic for composites. Custom kernels fall back to
/// jet_at_numeric with default quadrature parameters.
MatrixJet2 jet_at(const KernelModel &model, const Point &z0, unsigned d);

struct QuadratureOptions {
  /// Circle radius; default half the distance from z0 to the boundary
  /// (0.5 for entire kernels).
  std::optional<double> radius;
  /// Nodes per circle; default 4 (d + 1).
  std::optional<std::size_t> nodes;
};

/// Jet by tensor-product Cauchy quadrature over the 2m-torus of radius r
/// around (z0, z0). Exact to roundoff for polynomial kernels of per-variable
/// degree < N in z and conj(w).
MatrixJet2 jet_at_numeric(const KernelModel &model, const Point &z0,
                          unsigned d, const QuadratureOptions &options = {});

/// Named models with m <= 2 and n <= 2 used by tests and the CLI.
std::vector<std::pair<std::string, ModelPtr>> standard_catalog();

} // namespace cdloc
