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
#include "harmoq/src_calibration.hpp"

#include <cmath>
#include <string>

#include "harmoq/errors.hpp"

namespace harmoq {
namespace {

void CheckShapes(const Tensor2D& w, const SecondMoments& stats, const ProjectionMatrix& proj) {
  const std::size_t d = w.cols();
  for (const Tensor2D* s : {&stats.xx, &stats.dx, &stats.dd}) {
    if (s->rows() != d || s->cols() != d) {
      throw DimensionError("src: statistics " + s->ShapeString() + " do not match W " +
                           w.ShapeString());
    }
  }
  if (proj.h.cols() != d) {
    throw DimensionError("src: projection " + proj.h.ShapeString() + " does not match W " +
                         w.ShapeString());
  }
}

// dW H^+ = dW H^T (H H^T)^{-1}.
Tensor2D CoefficientsOf(const Tensor2D& delta_w, const Tensor2D& h) {
  const Tensor2D gram = Symmetrize(MatMulTransB(h, h));
  const Tensor2D rhs = MatMulTransB(delta_w, h);
  try {
    return CholeskySolve(gram, rhs, 0.0);
  } catch (const SingularityError&) {
    // Rank-deficient H: fall back to the stabilized pseudo-inverse.
    return CholeskySolve(gram, rhs, kDefaultCholeskyEps * (1.0 + Trace(gram)));
  }
}

}  // namespace

void SrcConfig::Validate() const {
  if (!(lambda > 0.0)) throw ConfigError("src: lambda must be > 0");
  if (!(solver_eps >= 0.0)) throw ConfigError("src: solver_eps must be >= 0");
}

double SrcObjective(const Tensor2D& delta_w, const Tensor2D& w, const SecondMoments& stats,
                    const ProjectionMatrix& projection, double lambda) {
  CheckShapes(w, stats, projection);
  RequireSameShape(delta_w, w, "src objective");
  const Tensor2D& h = projection.h;

  const Tensor2D coeffs = CoefficientsOf(delta_w, h);  // Z, m x k
  const Tensor2D in_span = MatMul(coeffs, h);          // dW P
  const Tensor2D off_span = Subtract(delta_w, in_span);  // dW (I - P)

  const double constant = FrobeniusInner(MatMul(w, stats.dd), w);
  const double cross = 2.0 * FrobeniusInner(MatMul(w, stats.dx), in_span);
  const double quadratic = FrobeniusInner(MatMul(in_span, stats.xx), in_span);
  const double penalty =
      lambda * (SquaredFrobeniusNorm(coeffs) + SquaredFrobeniusNorm(off_span));
  return constant + cross + quadratic + penalty;
}

Tensor2D ComputeSrcCorrection(const Tensor2D& w, const SecondMoments& stats,
                              const ProjectionMatrix& projection, const SrcConfig& cfg,
                              std::string_view layer) {
  cfg.Validate();
  CheckShapes(w, stats, projection);
  const Tensor2D& h = projection.h;

  // Multiply in the order that keeps the cost at O(k d^2 + m d k).
  const Tensor2D xx_ht = MatMulTransB(stats.xx, h);                    // d x k
  const Tensor2D system = AddScaledIdentity(Symmetrize(MatMul(h, xx_ht)), cfg.lambda);
  const Tensor2D rhs = Scale(MatMul(w, MatMulTransB(stats.dx, h)), -1.0);  // m x k

  Tensor2D coeffs;
  try {
    coeffs = CholeskySolve(system, rhs, cfg.solver_eps);
    // Iterative refinement against the unshifted system removes the bias the
    // stabilizer introduces; each pass shrinks it by ~eps / lambda_min.
    for (int pass = 0; pass < 2 && cfg.solver_eps > 0.0; ++pass) {
      const Tensor2D residual = Subtract(rhs, MatMul(coeffs, system));
      coeffs = Add(coeffs, CholeskySolve(system, residual, cfg.solver_eps));
    }
  } catch (const SingularityError& e) {
    throw SingularityError("src correction for layer '" + std::string(layer) + "': " + e.what());
  }
  Tensor2D correction = MatMul(coeffs, h);
  for (double v : correction.values()) {
    if (!std::isfinite(v)) {
      throw NumericError("src correction for layer '" + std::string(layer) + "' is not finite");
    }
  }
  return correction;
}

}  // namespace harmoq
