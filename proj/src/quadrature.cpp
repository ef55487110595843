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

// Cauchy-quadrature jets.
//
// With z = z0 + r e^{i theta} and conj(w) = conj(z0) + r e^{-i phi} per
// coordinate, K(z, w) = sum_{I,J} c_{IJ} r^{|I|+|J|} e^{i I.theta} e^{-i J.phi}
// where c_{IJ} = d^I dbar^J K / (I! J!). The trapezoidal rule with N nodes
// per circle recovers each c_{IJ} up to aliasing from frequencies shifted by
// multiples of N, hence exactness for per-variable degree < N.

#include <cmath>
#include <numbers>
#include <string>

#include "cdloc/errors.hpp"
#include "cdloc/kernels.hpp"

namespace cdloc {

namespace {

// Replaces axis `axis` (length dims[axis] = N) of a row-major tensor with
// the discrete Fourier coefficients 0..d: sum_a x[a] exp(sign * 2 pi i f a / N).
std::vector<Complex> reduce_axis(const std::vector<Complex> &data,
                                 std::vector<std::size_t> &dims,
                                 std::size_t axis, std::size_t tail,
                                 unsigned d, double sign) {
  const std::size_t nodes = dims[axis];
  std::size_t outer = 1, inner = tail;
  for (std::size_t k = 0; k < axis; ++k) outer *= dims[k];
  for (std::size_t k = axis + 1; k < dims.size(); ++k) inner *= dims[k];

  std::vector<Complex> phase((d + 1) * nodes);
  for (unsigned f = 0; f <= d; ++f)
    for (std::size_t a = 0; a < nodes; ++a)
      phase[f * nodes + a] = std::polar(
          1.0, sign * 2.0 * std::numbers::pi * double((f * a) % nodes) / double(nodes));

  std::vector<Complex> out(outer * (d + 1) * inner, Complex(0.0));
  for (std::size_t o = 0; o < outer; ++o)
    for (unsigned f = 0; f <= d; ++f) {
      Complex *dst = &out[(o * (d + 1) + f) * inner];
      for (std::size_t a = 0; a < nodes; ++a) {
        const Complex ph = phase[f * nodes + a];
        const Complex *src = &data[(o * nodes + a) * inner];
        for (std::size_t i = 0; i < inner; ++i) dst[i] += ph * src[i];
      }
    }
  dims[axis] = d + 1;
  return out;
}

} // namespace

MatrixJet2 jet_at_numeric(const KernelModel &model, const Point &z0,
                          unsigned d, const QuadratureOptions &options) {
  const std::size_t m = model.variables();
  const std::size_t n = model.rank();
  if (z0.size() != m)
    throw ShapeError("jet_at_numeric: basepoint dimension differs from model");
  const double dist = boundary_distance(model, z0);
  if (!(dist > 0.0))
    throw DomainError("jet_at_numeric: basepoint outside the model's domain");

  const double r = options.radius.value_or(std::isfinite(dist) ? 0.5 * dist : 0.5);
  const std::size_t nodes = options.nodes.value_or(4 * (std::size_t(d) + 1));
  if (!(r > 0.0)) throw DomainError("jet_at_numeric: radius must be > 0");
  if (nodes <= d)
    throw DomainError("jet_at_numeric: need more nodes than the jet order");

  // Sample grid over (a_1..a_m, b_1..b_m), row-major, n x n column-major tail.
  const std::size_t axes = 2 * m;
  const std::size_t tail = n * n;
  std::size_t total = 1;
  for (std::size_t k = 0; k < axes; ++k) total *= nodes;
  std::vector<Complex> samples(total * tail);

  std::vector<Complex> circle(nodes);
  for (std::size_t a = 0; a < nodes; ++a)
    circle[a] = std::polar(r, 2.0 * std::numbers::pi * double(a) / double(nodes));

  std::vector<std::size_t> digit(axes, 0);
  Point z(m), w(m);
  for (std::size_t flat = 0; flat < total; ++flat) {
    for (std::size_t c = 0; c < m; ++c) {
      z[c] = z0[c] + circle[digit[c]];
      w[c] = z0[c] + circle[digit[m + c]];
    }
    Matrix value;
    try {
      value = evaluate(model, z, w);
    } catch (const std::exception &e) {
      throw NumericalError(std::string("jet_at_numeric: evaluator failed: ") +
                           e.what());
    }
    for (std::size_t t = 0; t < tail; ++t) samples[flat * tail + t] = value(t);
    for (std::size_t k = axes; k-- > 0;) {
      if (++digit[k] < nodes) break;
      digit[k] = 0;
    }
  }

  std::vector<std::size_t> dims(axes, nodes);
  for (std::size_t k = 0; k < axes; ++k)
    samples = reduce_axis(samples, dims, k, tail, d, k < m ? -1.0 : 1.0);

  MatrixJet2 jet(m, n, d, z0);
  const IndexOrdering &ord = jet.ordering();
  const double norm = std::pow(double(nodes), -double(axes));
  for (std::size_t pi = 0; pi < ord.size(); ++pi)
    for (std::size_t pj = 0; pj < ord.size(); ++pj) {
      const MultiIndex &i = ord[pi];
      const MultiIndex &j = ord[pj];
      std::size_t flat = 0;
      for (std::size_t c = 0; c < m; ++c) flat = flat * (d + 1) + i[c];
      for (std::size_t c = 0; c < m; ++c) flat = flat * (d + 1) + j[c];
      const double factor = norm * double(factorial(i)) * double(factorial(j)) /
                            std::pow(r, double(i.degree() + j.degree()));
      Matrix &block = jet.at(pi, pj);
      for (std::size_t t = 0; t < tail; ++t) {
        const Complex v = factor * samples[flat * tail + t];
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
          throw NumericalError("jet_at_numeric: non-finite derivative");
        block(t) = v;
      }
    }
  return jet;
}

} // namespace cdloc
