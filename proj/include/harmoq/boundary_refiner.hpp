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
#ifndef HARMOQ_BOUNDARY_REFINER_HPP_
#define HARMOQ_BOUNDARY_REFINER_HPP_

#include <array>
#include <cstddef>
#include <utility>

#include "harmoq/scale_harmonizer.hpp"
#include "harmoq/tensor.hpp"

namespace harmoq {

struct RefinerConfig {
  double lr_init = 1e-2;
  double lr_final = 1e-4;
  std::size_t warmup_steps = 300;
  std::size_t horizon_steps = 3000;  // cosine decay ends here
  double grad_clip_norm = 1.0;
  std::size_t steps_per_round = 5;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_eps = 1e-8;
  double weight_decay = 0.0;  // decoupled; boundaries are not decayed by default
  double lr_scale = 1.0;      // multiplier applied on top of the schedule

  void Validate() const;
};

// Operands of one linear layer. The residual is measured against `reference`
// (the full-precision weights); `deployed` is what gets quantized, i.e. the
// reference plus any calibration correction. Inputs are n x d, one sample per
// row.
struct LayerOperands {
  const Tensor2D& reference;
  const Tensor2D& deployed;
  const Tensor2D& inputs;
};

// In the functions below `theta` holds the bounds of the quantizers that act on
// the scaled tensors x / s and s * W directly. With
//   dx = Q(x / s) - x / s,   dW = Q(s W_deployed) - s W_reference
// the compound loss is the batch mean of || (s W_reference) dx + dW (x / s) ||^2.
double TotalLoss(const LayerOperands& layer, double s, const BoundarySet& theta, BitWidths bits);
double TotalLoss(const Tensor2D& w, const Tensor2D& inputs, double s, const BoundarySet& theta,
                 BitWidths bits);

// Gradient order: (alpha_x, beta_x, alpha_w, beta_w).
using BoundaryVector = std::array<double, 4>;

BoundaryVector ToVector(const BoundarySet& theta);
BoundarySet FromVector(const BoundaryVector& v);

// Straight-through gradients of TotalLoss. Every element keeps its grid index
// n (clipped elements sit at n = 0 or n = 2^b - 1), so q = alpha + n (beta -
// alpha) / (2^b - 1) and dq/dalpha = 1 - n / (2^b - 1), dq/dbeta = n / (2^b - 1).
BoundaryVector BoundaryGradients(const LayerOperands& layer, double s, const BoundarySet& theta,
                                 BitWidths bits);
BoundaryVector BoundaryGradients(const Tensor2D& w, const Tensor2D& inputs, double s,
                                 const BoundarySet& theta, BitWidths bits);

struct AdamState {
  BoundaryVector m{};
  BoundaryVector v{};
  std::size_t t = 0;
  bool operator==(const AdamState&) const = default;
};

// Linear warmup to lr_init over warmup_steps, then cosine decay to lr_final
// at horizon_steps, times lr_scale.
double LearningRate(const RefinerConfig& cfg, std::size_t step_index);

// Rescales g so its Euclidean norm is at most max_norm.
BoundaryVector ClipGlobalNorm(const BoundaryVector& g, double max_norm);

// Feasibility projection: alpha <- min(alpha, beta - 0.01) on both sides.
BoundarySet ProjectFeasible(const BoundarySet& theta);

// One projected Adam step on the boundaries.
std::pair<AdamState, BoundarySet> RefineStep(const AdamState& state, const BoundarySet& theta,
                                             const BoundaryVector& gradient,
                                             const RefinerConfig& cfg, std::size_t step_index);

}  // namespace harmoq

#endif  // HARMOQ_BOUNDARY_REFINER_HPP_
