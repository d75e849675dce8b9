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
#include "harmoq/linalg.hpp"

#include <cmath>
#include <random>

#include "harmoq/errors.hpp"

namespace harmoq {

Tensor2D CholeskyFactor(const Tensor2D& a) {
  const std::size_t n = a.rows();
  Tensor2D l(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    double diag = a(j, j);
    for (std::size_t p = 0; p < j; ++p) diag -= l(j, p) * l(j, p);
    if (!(diag > 0.0) || !std::isfinite(diag)) {
      throw SingularityError("cholesky: non-positive pivot " + std::to_string(diag) +
                             " at column " + std::to_string(j));
    }
    const double ljj = std::sqrt(diag);
    l(j, j) = ljj;
    for (std::size_t i = j + 1; i < n; ++i) {
      double acc = a(i, j);
      for (std::size_t p = 0; p < j; ++p) acc -= l(i, p) * l(j, p);
      l(i, j) = acc / ljj;
    }
  }
  return l;
}

Tensor2D CholeskySolve(const Tensor2D& a, const Tensor2D& b, double eps) {
  if (a.rows() != a.cols()) {
    throw DimensionError("cholesky_solve: A must be square, got " + a.ShapeString());
  }
  if (b.cols() != a.rows()) {
    throw DimensionError("cholesky_solve: B " + b.ShapeString() + " incompatible with A " +
                         a.ShapeString());
  }
  if (!(eps >= 0.0)) throw ConfigError("cholesky_solve: eps must be >= 0");

  const std::size_t k = a.rows();
  const double scale = MaxAbs(a);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j) {
      if (std::abs(a(i, j) - a(j, i)) > kSymmetryTolerance * scale) {
        throw DimensionError("cholesky_solve: A is not symmetric at (" + std::to_string(i) +
                             ", " + std::to_string(j) + ")");
      }
    }
  }

  const Tensor2D l = CholeskyFactor(AddScaledIdentity(a, eps));

  // (A + eps I) is symmetric, so X (A + eps I) = B is L L^T x = b per row of B.
  Tensor2D x(b.rows(), k);
  std::vector<double> y(k);
  for (std::size_t r = 0; r < b.rows(); ++r) {
    const auto rhs = b.row(r);
    for (std::size_t i = 0; i < k; ++i) {
      double acc = rhs[i];
      for (std::size_t p = 0; p < i; ++p) acc -= l(i, p) * y[p];
      y[i] = acc / l(i, i);
    }
    auto out = x.row(r);
    for (std::size_t ii = k; ii-- > 0;) {
      double acc = y[ii];
      for (std::size_t p = ii + 1; p < k; ++p) acc -= l(p, ii) * out[p];
      out[ii] = acc / l(ii, ii);
    }
  }
  return x;
}

Tensor2D SeededGaussian(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  if (rows == 0 || cols == 0) {
    throw DimensionError("seeded_gaussian: dimensions must be >= 1");
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> data(rows * cols);
  for (double& v : data) v = normal(rng);
  return Tensor2D(rows, cols, std::move(data));
}

}  // namespace harmoq
