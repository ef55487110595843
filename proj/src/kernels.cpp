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

#include "cdloc/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "cdloc/errors.hpp"

namespace cdloc {

namespace {

template <class... Ts> struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts> Overloaded(Ts...) -> Overloaded<Ts...>;

Complex power(const Point &base, const MultiIndex &exponent) {
  Complex r = 1.0;
  for (std::size_t i = 0; i < exponent.size(); ++i)
    for (unsigned k = 0; k < exponent[i]; ++k) r *= base[i];
  return r;
}

Point conj(const Point &p) {
  Point out(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) out[i] = std::conj(p[i]);
  return out;
}

// r-th derivative of g(u) = (1 - u)^{-weight}: (weight)_r (1 - u)^{-weight-r}.
Complex binomial_series_derivative(double weight, unsigned r, Complex u) {
  double rising = 1.0;
  for (unsigned k = 0; k < r; ++k) rising *= weight + k;
  return rising * std::pow(1.0 - u, -weight - double(r));
}

// d_z^I dbar_w^J (1 - <z, w>)^{-weight} at z = w = z0. Expanding
// d_z^I g(<z,w>) = conj(w)^I g^{(|I|)} and applying Leibniz in conj(w):
//   sum_{B <= I, B <= J} C(J,B) I!/(I-B)! conj(z0)^{I-B} z0^{J-B} g^{(|I|+|J|-|B|)}.
Complex inner_product_kernel_derivative(double weight, const Point &z0,
                                        const MultiIndex &i,
                                        const MultiIndex &j) {
  Complex u = 0.0;
  for (const Complex &c : z0) u += c * std::conj(c);
  const Point z0bar = conj(z0);
  MultiIndex bound(i.size());
  for (std::size_t k = 0; k < i.size(); ++k) bound[k] = std::min(i[k], j[k]);
  const IndexOrdering lower(i.size(), bound.degree());
  Complex total = 0.0;
  for (const MultiIndex &b : lower) {
    if (!geq(bound, b)) continue;
    const double coeff = double(binomial(j, b)) * double(falling(i, b));
    total += coeff * power(z0bar, sub(i, b)) * power(z0, sub(j, b)) *
             binomial_series_derivative(weight, i.degree() + j.degree() - b.degree(), u);
  }
  return total;
}

MatrixJet2 scalar_jet(std::size_t m, const Point &z0, unsigned d,
                      const std::function<Complex(const MultiIndex &,
                                                  const MultiIndex &)> &entry) {
  MatrixJet2 jet(m, 1, d, z0);
  const IndexOrdering &ord = jet.ordering();
  for (std::size_t pi = 0; pi < ord.size(); ++pi)
    for (std::size_t pj = 0; pj < ord.size(); ++pj)
      jet.at(pi, pj)(0, 0) = entry(ord[pi], ord[pj]);
  return jet;
}

void require_domain(const KernelModel &model, const Point &z0) {
  if (z0.size() != model.variables())
    throw ShapeError("basepoint has " + std::to_string(z0.size()) +
                     " coordinates, model has " +
                     std::to_string(model.variables()) + " variables");
  if (!contains(model, z0))
    throw DomainError("basepoint outside the domain of " + model.describe());
}

std::string format_point(const Point &z) {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < z.size(); ++i) {
    if (i) os << ", ";
    os << z[i].real() << (z[i].imag() < 0 ? "-" : "+") << std::abs(z[i].imag())
       << 'i';
  }
  os << ')';
  return os.str();
}

} // namespace

KernelModel::KernelModel(Variant v) : variant_(std::move(v)) {
  std::visit(
      Overloaded{
          [&](const ProductPolydisc &k) { m_ = k.weights.size(); n_ = 1; },
          [&](const BallKernel &k) { m_ = k.m; n_ = 1; },
          [&](const PowerSeries &k) { m_ = k.m; n_ = k.n; },
          [&](const DirectSum &k) {
            m_ = k.first->variables();
            n_ = k.first->rank() + k.second->rank();
          },
          [&](const ConjugateBy &k) {
            m_ = k.inner->variables();
            n_ = k.inner->rank();
          },
          [&](const Scale &k) {
            m_ = k.inner->variables();
            n_ = k.inner->rank();
          },
          [&](const CustomKernel &k) { m_ = k.m; n_ = k.n; },
      },
      variant_);
}

std::string KernelModel::describe() const {
  std::ostringstream os;
  std::visit(
      Overloaded{
          [&](const ProductPolydisc &k) {
            os << "polydisc(";
            for (std::size_t i = 0; i < k.weights.size(); ++i)
              os << (i ? "," : "") << k.weights[i];
            os << ')';
          },
          [&](const BallKernel &k) {
            os << "ball(m=" << k.m << ",weight=" << k.weight << ')';
          },
          [&](const PowerSeries &k) {
            os << "power_series(m=" << k.m << ",n=" << k.n
               << ",terms=" << k.terms.size() << ')';
          },
          [&](const DirectSum &k) {
            os << "direct_sum(" << k.first->describe() << ", "
               << k.second->describe() << ')';
          },
          [&](const ConjugateBy &k) {
            os << "transform(" << k.inner->describe()
               << ", order=" << k.transform.order() << ')';
          },
          [&](const Scale &k) {
            os << "scale(" << k.inner->describe() << ", " << k.factor << ')';
          },
          [&](const CustomKernel &k) { os << k.label; },
      },
      variant_);
  return os.str();
}

ModelPtr product_polydisc(std::vector<double> weights) {
  if (weights.empty())
    throw DomainError("product_polydisc: need at least one variable");
  for (double w : weights)
    if (!(w > 0.0)) throw DomainError("product_polydisc: weights must be > 0");
  return std::make_shared<const KernelModel>(ProductPolydisc{std::move(weights)});
}

ModelPtr szego(std::size_t m) { return product_polydisc(std::vector<double>(m, 1.0)); }

ModelPtr bergman(std::size_t m) {
  return product_polydisc(std::vector<double>(m, 2.0));
}

ModelPtr ball(std::size_t m, double weight) {
  if (m == 0) throw DomainError("ball: need at least one variable");
  if (!(weight > 0.0)) throw DomainError("ball: weight must be > 0");
  return std::make_shared<const KernelModel>(BallKernel{m, weight});
}

ModelPtr power_series(std::size_t m, std::size_t n,
                      std::map<std::pair<MultiIndex, MultiIndex>, Matrix> terms) {
  if (m == 0 || n == 0) throw DomainError("power_series: m and n must be >= 1");
  double scale = 0.0;
  for (const auto &[key, a] : terms) {
    if (key.first.size() != m || key.second.size() != m)
      throw ShapeError("power_series: multi-index length differs from m");
    if (a.rows() != Eigen::Index(n) || a.cols() != Eigen::Index(n))
      throw ShapeError("power_series: coefficient is not n x n");
    scale = std::max(scale, a.cwiseAbs().maxCoeff());
  }
  const double tol = 1e-12 * std::max(1.0, scale);
  for (const auto &[key, a] : terms) {
    auto it = terms.find({key.second, key.first});
    const Matrix mirror = it == terms.end() ? Matrix::Zero(n, n) : it->second;
    if ((mirror - a.adjoint()).cwiseAbs().maxCoeff() > tol)
      throw DomainError("power_series: coefficients violate A[Q][P] = A[P][Q]^* at " +
                        key.first.to_string() + "," + key.second.to_string());
  }
  return std::make_shared<const KernelModel>(PowerSeries{m, n, std::move(terms)});
}

ModelPtr direct_sum(ModelPtr a, ModelPtr b) {
  if (!a || !b) throw DomainError("direct_sum: null model");
  if (a->variables() != b->variables())
    throw ShapeError("direct_sum: variable counts differ");
  return std::make_shared<const KernelModel>(DirectSum{std::move(a), std::move(b)});
}

ModelPtr transform(ModelPtr model, const Matrix &phi0) {
  if (!model) throw DomainError("transform: null model");
  if (phi0.rows() != Eigen::Index(model->rank()) ||
      phi0.cols() != Eigen::Index(model->rank()))
    throw ShapeError("transform: matrix size differs from model rank");
  if (!(condition_number(phi0) <= kConditionLimit))
    throw DomainError("transform: frame change matrix is not invertible");
  const std::size_t m = model->variables();
  return transform(std::move(model),
                   HoloJet::constant(phi0, m, 0, Point(m, 0.0)));
}

ModelPtr transform(ModelPtr model, HoloJet phi) {
  if (!model) throw DomainError("transform: null model");
  if (phi.variables() != model->variables() || phi.rank() != model->rank())
    throw ShapeError("transform: frame jet shape differs from model");
  return std::make_shared<const KernelModel>(
      ConjugateBy{std::move(model), std::move(phi)});
}

ModelPtr scale(ModelPtr model, double factor) {
  if (!model) throw DomainError("scale: null model");
  if (!(factor > 0.0)) throw DomainError("scale: factor must be > 0");
  return std::make_shared<const KernelModel>(Scale{std::move(model), factor});
}

ModelPtr custom(CustomKernel kernel) {
  if (!kernel.evaluate) throw DomainError("custom: evaluator missing");
  if (kernel.m == 0 || kernel.n == 0)
    throw DomainError("custom: m and n must be >= 1");
  return std::make_shared<const KernelModel>(std::move(kernel));
}

double boundary_distance(const KernelModel &model, const Point &z) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  return std::visit(
      Overloaded{
          [&](const ProductPolydisc &) {
            double r = inf;
            for (const Complex &c : z) r = std::min(r, 1.0 - std::abs(c));
            return r;
          },
          [&](const BallKernel &) {
            double s = 0.0;
            for (const Complex &c : z) s += std::norm(c);
            return 1.0 - std::sqrt(s);
          },
          [&](const PowerSeries &) { return inf; },
          [&](const DirectSum &k) {
            return std::min(boundary_distance(*k.first, z),
                            boundary_distance(*k.second, z));
          },
          [&](const ConjugateBy &k) { return boundary_distance(*k.inner, z); },
          [&](const Scale &k) { return boundary_distance(*k.inner, z); },
          [&](const CustomKernel &k) {
            return k.boundary_distance ? k.boundary_distance(z) : inf;
          },
      },
      model.variant());
}

bool contains(const KernelModel &model, const Point &z) {
  return z.size() == model.variables() && boundary_distance(model, z) > 0.0;
}

Matrix evaluate(const KernelModel &model, const Point &z, const Point &w) {
  if (z.size() != model.variables() || w.size() != model.variables())
    throw ShapeError("evaluate: point dimension differs from model");
  return std::visit(
      Overloaded{
          [&](const ProductPolydisc &k) -> Matrix {
            Complex v = 1.0;
            for (std::size_t i = 0; i < z.size(); ++i)
              v *= std::pow(1.0 - z[i] * std::conj(w[i]), -k.weights[i]);
            return Matrix::Constant(1, 1, v);
          },
          [&](const BallKernel &k) -> Matrix {
            Complex u = 0.0;
            for (std::size_t i = 0; i < z.size(); ++i) u += z[i] * std::conj(w[i]);
            return Matrix::Constant(1, 1, std::pow(1.0 - u, -k.weight));
          },
          [&](const PowerSeries &k) -> Matrix {
            Matrix acc = Matrix::Zero(k.n, k.n);
            const Point wbar = conj(w);
            for (const auto &[key, a] : k.terms)
              acc += a * (power(z, key.first) * power(wbar, key.second));
            return acc;
          },
          [&](const DirectSum &k) -> Matrix {
            const std::size_t n1 = k.first->rank(), n2 = k.second->rank();
            Matrix out = Matrix::Zero(n1 + n2, n1 + n2);
            out.topLeftCorner(n1, n1) = evaluate(*k.first, z, w);
            out.bottomRightCorner(n2, n2) = evaluate(*k.second, z, w);
            return out;
          },
          [&](const ConjugateBy &k) -> Matrix {
            return k.transform.evaluate(z) * evaluate(*k.inner, z, w) *
                   k.transform.evaluate(w).adjoint();
          },
          [&](const Scale &k) -> Matrix {
            return k.factor * evaluate(*k.inner, z, w);
          },
          [&](const CustomKernel &k) -> Matrix {
            Matrix v = k.evaluate(z, w);
            if (v.rows() != Eigen::Index(k.n) || v.cols() != Eigen::Index(k.n))
              throw ShapeError("custom evaluator returned wrong shape");
            return v;
          },
      },
      model.variant());
}

MatrixJet2 jet_at(const KernelModel &model, const Point &z0, unsigned d) {
  require_domain(model, z0);
  const std::size_t m = model.variables();
  return std::visit(
      Overloaded{
          [&](const ProductPolydisc &k) {
            // Factors separate variables, so the jet is the product of the
            // one-variable jets coordinate by coordinate.
            return scalar_jet(m, z0, d, [&](const MultiIndex &i, const MultiIndex &j) {
              Complex v = 1.0;
              for (std::size_t c = 0; c < m; ++c)
                v *= inner_product_kernel_derivative(k.weights[c], {z0[c]},
                                                     MultiIndex{i[c]},
                                                     MultiIndex{j[c]});
              return v;
            });
          },
          [&](const BallKernel &k) {
            return scalar_jet(m, z0, d, [&](const MultiIndex &i, const MultiIndex &j) {
              return inner_product_kernel_derivative(k.weight, z0, i, j);
            });
          },
          [&](const PowerSeries &k) {
            MatrixJet2 jet(m, k.n, d, z0);
            const IndexOrdering &ord = jet.ordering();
            const Point z0bar = conj(z0);
            for (const auto &[key, a] : k.terms) {
              const auto &[p, q] = key;
              for (std::size_t pi = 0; pi < ord.size(); ++pi) {
                const std::uint64_t fi = falling(p, ord[pi]);
                if (fi == 0) continue;
                const Complex zi = power(z0, sub(p, ord[pi]));
                for (std::size_t pj = 0; pj < ord.size(); ++pj) {
                  const std::uint64_t fj = falling(q, ord[pj]);
                  if (fj == 0) continue;
                  jet.at(pi, pj) += a * (double(fi) * double(fj) * zi *
                                         power(z0bar, sub(q, ord[pj])));
                }
              }
            }
            return jet;
          },
          [&](const DirectSum &k) {
            const MatrixJet2 a = jet_at(*k.first, z0, d);
            const MatrixJet2 b = jet_at(*k.second, z0, d);
            const std::size_t n1 = a.rank(), n2 = b.rank();
            MatrixJet2 jet(m, n1 + n2, d, z0);
            const std::size_t l = jet.ordering().size();
            for (std::size_t pi = 0; pi < l; ++pi)
              for (std::size_t pj = 0; pj < l; ++pj) {
                jet.at(pi, pj).topLeftCorner(n1, n1) = a.at(pi, pj);
                jet.at(pi, pj).bottomRightCorner(n2, n2) = b.at(pi, pj);
              }
            return jet;
          },
          [&](const ConjugateBy &k) {
            const HoloJet phi = k.transform.recentered(z0, d);
            if (!(condition_number(phi.at(0)) <= kConditionLimit))
              throw NumericalError("frame change is singular at " +
                                   format_point(z0));
            return sandwich(phi, jet_at(*k.inner, z0, d), phi);
          },
          [&](const Scale &k) { return k.factor * jet_at(*k.inner, z0, d); },
          [&](const CustomKernel &) { return jet_at_numeric(model, z0, d); },
      },
      model.variant());
}

std::vector<std::pair<std::string, ModelPtr>> standard_catalog() {
  std::vector<std::pair<std::string, ModelPtr>> out;
  out.emplace_back("szego", szego(1));
  out.emplace_back("bergman", bergman(1));
  out.emplace_back("weighted-bergman-3", product_polydisc({3.0}));
  out.emplace_back("bidisc-szego", szego(2));
  out.emplace_back("polydisc-1-2", product_polydisc({1.0, 2.0}));
  out.emplace_back("drury-arveson", ball(2, 1.0));
  out.emplace_back("ball-hardy", ball(2, 2.0));

  out.emplace_back("szego+bergman", direct_sum(szego(1), bergman(1)));

  // I + z C with a non-normal C: a genuinely z-dependent frame change that
  // mixes the two summands.
  HoloJet twist = HoloJet::identity(1, 2, 1, {0.0});
  twist[MultiIndex{1}] << Complex(0.2, 0.1), Complex(0.3, 0.0),
      Complex(0.0, -0.1), Complex(0.1, 0.2);
  out.emplace_back("twisted-szego+bergman",
                   transform(direct_sum(szego(1), bergman(1)), twist));

  {
    // K(z,w) = V(z) X X^* V(w)^*, V(z) = [1, z, z^2] (x) I_2.
    Matrix x(6, 6);
    x << 1.0, 0.2, 0.0, 0.1, 0.0, 0.0,
         0.0, 1.1, 0.3, 0.0, 0.1, 0.0,
         0.1, 0.0, 0.9, 0.2, 0.0, 0.1,
         0.0, 0.2, 0.0, 1.2, 0.1, 0.0,
         0.0, 0.0, 0.1, 0.0, 0.8, 0.2,
         0.1, 0.0, 0.0, 0.1, 0.0, 1.0;
    x += Complex(0.0, 0.1) * Matrix::Identity(6, 6).reverse();
    const Matrix a = x * x.adjoint();
    std::map<std::pair<MultiIndex, MultiIndex>, Matrix> terms;
    for (unsigned p = 0; p < 3; ++p)
      for (unsigned q = 0; q < 3; ++q)
        terms[{MultiIndex{p}, MultiIndex{q}}] = a.block(2 * p, 2 * q, 2, 2);
    out.emplace_back("power-series-rank2", power_series(1, 2, std::move(terms)));
  }
  {
    // Two-variable scalar series over the monomials of degree <= 2.
    const IndexOrdering mono(2, 2);
    const std::size_t l = mono.size();
    Matrix x = Matrix::Identity(l, l);
    for (std::size_t i = 0; i + 1 < l; ++i) x(i, i + 1) = Complex(0.15, -0.05);
    const Matrix a = x * x.adjoint();
    std::map<std::pair<MultiIndex, MultiIndex>, Matrix> terms;
    for (std::size_t p = 0; p < l; ++p)
      for (std::size_t q = 0; q < l; ++q)
        terms[{mono[p], mono[q]}] = a.block(p, q, 1, 1);
    out.emplace_back("power-series-2var", power_series(2, 1, std::move(terms)));
  }
  out.emplace_back("drury-arveson+polydisc-1-2",
                   direct_sum(ball(2, 1.0), product_polydisc({1.0, 2.0})));
  return out;
}

} // namespace cdloc
