/* Copyright 2026 The harmoq Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/
#ifndef HARMOQ_TESTS_ORACLES_HPP_
#define HARMOQ_TESTS_ORACLES_HPP_

#include <algorithm>
#include <array>
#include <cmath>
#include <random>
#include <vector>

#include "harmoq/boundary_refiner.hpp"
#include "harmoq/calibration_stats.hpp"
#include "harmoq/projection.hpp"
#include "harmoq/scale_harmonizer.hpp"
#include "harmoq/tensor.hpp"
#include "test_support.hpp"

namespace harmoq::testing {

using Matrix = std::vector<std::vector<double>>;

inline Matrix Zero(std::size_t r, std::size_t c) { return Matrix(r, std::vector<double>(c, 0.0)); }

inline Matrix TransposeOf(const Matrix& a) {
  Matrix t = Zero(a[0].size(), a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a[0].size(); ++j) t[j][i] = a[i][j];
  return t;
}

inline double Inner(const Matrix& a, const Matrix& b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a[0].size(); ++j) acc += a[i][j] * b[i][j];
  return acc;
}

// One calibration problem: weights, exact moments and a projection.
struct SrcInstance {
  Tensor2D w;
  SecondMoments stats;
  ProjectionMatrix projection;
  double lambda = 1e-2;
};

// Moments of x ~ N(0, A A^T), dx = B x + e with e ~ N(0, sigma^2 I), which
// are S_xx = A A^T, S_dx = B S_xx, S_dd = B S_xx B^T + sigma^2 I.
inline SecondMoments GaussianModelMoments(const Tensor2D& a, const Tensor2D& b, double sigma) {
  const Matrix sxx = NaiveProduct(Rows(a), TransposeOf(Rows(a)));
  const Matrix sdx = NaiveProduct(Rows(b), sxx);
  Matrix sdd = NaiveProduct(sdx, TransposeOf(Rows(b)));
  for (std::size_t i = 0; i < sdd.size(); ++i) sdd[i][i] += sigma * sigma;
  auto to_tensor = [](const Matrix& m) {
    Tensor2D t(m.size(), m[0].size());
    for (std::size_t i = 0; i < m.size(); ++i)
      for (std::size_t j = 0; j < m[0].size(); ++j) t(i, j) = m[i][j];
    return t;
  };
  SecondMoments out{Symmetrize(to_tensor(sxx)), to_tensor(sdx), Symmetrize(to_tensor(sdd))};
  return out;
}

inline SrcInstance RandomSrcInstance(std::mt19937_64& rng, std::size_t m, std::size_t d,
                                     std::size_t k, double lambda) {
  SrcInstance inst;
  inst.w = RandomTensor(m, d, rng);
  const Tensor2D a = RandomTensor(d, d, rng);
  const Tensor2D b = RandomTensor(d, d, rng, -0.3, 0.3);
  inst.stats = GaussianModelMoments(a, b, 0.05);
  inst.projection.kind = ProjectionKind::kRandom;
  inst.projection.h = RandomTensor(k, d, rng);
  inst.lambda = lambda;
  return inst;
}

// Objective over coefficients Z (dW = Z H):
//   tr(W S_dd W^T) + 2 <W S_dx H^T, Z> + tr(Z H S_xx H^T Z^T) + lambda ||Z||^2
struct CoefficientObjective {
  Matrix c_lin;   // W S_dx H^T, m x k
  Matrix quad;    // H S_xx H^T + lambda I, k x k
  double constant = 0.0;

  explicit CoefficientObjective(const SrcInstance& inst) {
    const Matrix w = Rows(inst.w);
    const Matrix h = Rows(inst.projection.h);
    const Matrix ht = TransposeOf(h);
    c_lin = NaiveProduct(NaiveProduct(w, Rows(inst.stats.dx)), ht);
    quad = NaiveProduct(NaiveProduct(h, Rows(inst.stats.xx)), ht);
    for (std::size_t i = 0; i < quad.size(); ++i) quad[i][i] += inst.lambda;
    constant = Inner(NaiveProduct(w, Rows(inst.stats.dd)), w);
  }

  double Value(const Matrix& z) const {
    return constant + 2.0 * Inner(c_lin, z) + Inner(NaiveProduct(z, quad), z);
  }

  Matrix Gradient(const Matrix& z) const {
    Matrix g = NaiveProduct(z, quad);
    for (std::size_t i = 0; i < g.size(); ++i)
      for (std::size_t j = 0; j < g[0].size(); ++j) g[i][j] = 2.0 * (g[i][j] + c_lin[i][j]);
    return g;
  }

  // Plain gradient descent with step 1 / (2 ||Q||_F), which bounds the
  // Lipschitz constant of the gradient.
  Matrix Descend(Matrix z, std::size_t steps) const {
    double fro = 0.0;
    for (const auto& row : quad)
      for (double v : row) fro += v * v;
    const double step = 1.0 / (2.0 * std::sqrt(fro));
    for (std::size_t s = 0; s < steps; ++s) {
      const Matrix g = Gradient(z);
      for (std::size_t i = 0; i < z.size(); ++i)
        for (std::size_t j = 0; j < z[0].size(); ++j) z[i][j] -= step * g[i][j];
    }
    return z;
  }
};

inline Tensor2D LiftCoefficients(const Matrix& z, const Tensor2D& h) {
  Tensor2D zt(z.size(), z[0].size());
  for (std::size_t i = 0; i < z.size(); ++i)
    for (std::size_t j = 0; j < z[0].size(); ++j) zt(i, j) = z[i][j];
  return MatMul(zt, h);
}

// Frozen-index surrogate of the compound loss. Indices come from `frozen`;
// the grid levels follow `theta`.
class FrozenSurrogate {
 public:
  FrozenSurrogate(const Tensor2D& w, const Tensor2D& x, double s, const BoundarySet& frozen,
                  BitWidths bits)
      : w_(w), x_(x), s_(s), bits_(bits) {
    const int lx = (1 << bits.activation) - 1;
    const int lw = (1 << bits.weight) - 1;
    idx_x_ = Indices(x, 1.0 / s, frozen.alpha_x, frozen.beta_x, lx);
    idx_w_ = Indices(w, s, frozen.alpha_w, frozen.beta_w, lw);
  }

  double operator()(const BoundarySet& theta) const {
    const int lx = (1 << bits_.activation) - 1;
    const int lw = (1 << bits_.weight) - 1;
    const std::size_t n = x_.rows(), d = x_.cols(), m = w_.rows();
    std::vector<double> dw(m * d);
    for (std::size_t i = 0; i < m * d; ++i) {
      const double q = theta.alpha_w + idx_w_[i] * (theta.beta_w - theta.alpha_w) / lw;
      dw[i] = q - s_ * w_.values()[i];
    }
    double total = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
      std::vector<double> xs(d), dx(d);
      for (std::size_t j = 0; j < d; ++j) {
        xs[j] = x_(r, j) / s_;
        const double q = theta.alpha_x + idx_x_[r * d + j] * (theta.beta_x - theta.alpha_x) / lx;
        dx[j] = q - xs[j];
      }
      for (std::size_t i = 0; i < m; ++i) {
        double res = 0.0;
        for (std::size_t j = 0; j < d; ++j) res += s_ * w_(i, j) * dx[j] + dw[i * d + j] * xs[j];
        total += res * res;
      }
    }
    return total / static_cast<double>(n);
  }

  BoundaryVector CentralDifference(const BoundarySet& theta, double h) const {
    BoundaryVector g{};
    for (int i = 0; i < 4; ++i) {
      BoundaryVector plus = ToVector(theta), minus = ToVector(theta);
      plus[i] += h;
      minus[i] -= h;
      g[i] = ((*this)(FromVector(plus)) - (*this)(FromVector(minus))) / (2.0 * h);
    }
    return g;
  }

 private:
  static std::vector<int> Indices(const Tensor2D& t, double factor, double alpha, double beta,
                                  int levels) {
    std::vector<int> out;
    for (double v : t.values()) {
      const double z = std::clamp((v * factor - alpha) / ((beta - alpha) / levels), 0.0,
                                  static_cast<double>(levels));
      out.push_back(static_cast<int>(std::nearbyint(z)));
    }
    return out;
  }

  Tensor2D w_;
  Tensor2D x_;
  double s_;
  BitWidths bits_;
  std::vector<int> idx_x_;
  std::vector<int> idx_w_;
};

inline double RelativeError(const BoundaryVector& a, const BoundaryVector& b) {
  double diff = 0.0, norm = 0.0;
  for (int i = 0; i < 4; ++i) {
    diff += (a[i] - b[i]) * (a[i] - b[i]);
    norm += b[i] * b[i];
  }
  return std::sqrt(diff) / std::max(std::sqrt(norm), 1e-12);
}

// Random layer, inputs and bounds for gradient checks. Inputs avoid rounding
// ties so that the frozen indices are unambiguous.
struct GradientCase {
  Tensor2D w;
  Tensor2D x;
  double s = 1.0;
  BoundarySet theta;
  BitWidths bits;
};

inline GradientCase RandomGradientCase(std::mt19937_64& rng) {
  std::uniform_int_distribution<std::size_t> dim(1, 8);
  std::uniform_int_distribution<int> bit(2, 3);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  GradientCase c;
  const std::size_t d = dim(rng), m = dim(rng);
  c.w = RandomTensor(m, d, rng);
  c.x = RandomTensor(16, d, rng, -0.5, 2.0);
  c.s = 0.5 + 1.5 * unit(rng);
  c.bits = {bit(rng), bit(rng)};
  // Bounds inside the data range so that both clipped and interior elements
  // occur.
  c.theta.alpha_x = (-0.3 + 0.4 * unit(rng)) / c.s;
  c.theta.beta_x = (1.0 + 0.8 * unit(rng)) / c.s;
  c.theta.alpha_w = c.s * (-0.8 + 0.3 * unit(rng));
  c.theta.beta_w = c.s * (0.5 + 0.4 * unit(rng));
  return c;
}

}  // namespace harmoq::testing

#endif  // HARMOQ_TESTS_ORACLES_HPP_
