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
#ifndef HARMOQ_SRC_CALIBRATION_HPP_
#define HARMOQ_SRC_CALIBRATION_HPP_

#include <string_view>

#include "harmoq/calibration_stats.hpp"
#include "harmoq/linalg.hpp"
#include "harmoq/projection.hpp"
#include "harmoq/tensor.hpp"

namespace harmoq {

// Structural residual calibration.
//
// The weight correction is restricted to the row space of the structural
// projection H, dW = Z H with Z in R^{m x k}: the correction only responds to
// the structural features H x of the layer input. For such corrections the
// calibration objective is
//
//   J(dW) = E || W dx + dW x ||^2 + lambda ||Z||_F^2,
//
// whose unique minimizer is
//
//   dW* = -W E[dx x^T] H^T (H E[x x^T] H^T + lambda I_k)^{-1} H.
//
// For an arbitrary m x d dW, J is extended with P = H^+ H (the orthogonal
// projector onto the row space of H) as
//
//   J(dW) = tr(W S_dd W^T) + 2 tr(W S_dx P dW^T) + tr(dW P S_xx P dW^T)
//         + lambda (||dW H^+||_F^2 + ||dW (I - P)||_F^2)
//
// which is strictly convex for lambda > 0 and still minimized by dW*. With
// H = I this is ordinary ridge calibration, and for orthonormal rows the
// penalty is lambda ||dW||_F^2. The second-order term dW dx is neglected.
struct SrcConfig {
  double lambda = 1e-2;
  double solver_eps = kDefaultCholeskyEps;

  void Validate() const;  // lambda > 0, solver_eps >= 0
};

double SrcObjective(const Tensor2D& delta_w, const Tensor2D& w, const SecondMoments& stats,
                    const ProjectionMatrix& projection, double lambda);

// Closed-form minimizer of SrcObjective. The k x k system is solved by
// CholeskySolve with cfg.solver_eps. A SingularityError names `layer`.
Tensor2D ComputeSrcCorrection(const Tensor2D& w, const SecondMoments& stats,
                              const ProjectionMatrix& projection, const SrcConfig& cfg,
                              std::string_view layer = {});

}  // namespace harmoq

#endif  // HARMOQ_SRC_CALIBRATION_HPP_
