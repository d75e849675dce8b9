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
#ifndef HARMOQ_SCALE_HARMONIZER_HPP_
#define HARMOQ_SCALE_HARMONIZER_HPP_

#include <utility>

#include "harmoq/quantizer.hpp"
#include "harmoq/tensor.hpp"

namespace harmoq {

inline constexpr double kMinScale = 0.1;
inline constexpr double kMaxScale = 10.0;

// Clipping boundaries of one layer, theta = (alpha_x, beta_x, alpha_w, beta_w).
struct BoundarySet {
  double alpha_x = 0.0;
  double beta_x = 1.0;
  double alpha_w = -1.0;
  double beta_w = 1.0;

  void Validate() const;  // each side needs alpha <= beta - 0.01
  double range_x() const { return beta_x - alpha_x; }
  double range_w() const { return beta_w - alpha_w; }
  bool operator==(const BoundarySet&) const = default;
};

struct BitWidths {
  int activation = 2;
  int weight = 2;
};

enum class QuantSide { kActivation, kWeight };

// Closed-form MSE model of one side after scaling activations by 1/s and
// weights by s:
//   activation: range_x^2 / (12 s^2 (2^b_x - 1)^2)
//   weight:     range_w^2 s^2 / (12 (2^b_w - 1)^2)
double ComponentMse(QuantSide side, double s, const BoundarySet& theta, BitWidths bits);

// |MSE_x(s) - MSE_w(s)|.
double BalanceGap(double s, const BoundarySet& theta, BitWidths bits);

struct LayerScale {
  double s = 1.0;      // clamped to [0.1, 10]
  double raw = 1.0;    // closed-form value before clamping
  bool clamped = false;
};

// s* = sqrt(range_x (2^b_w - 1) / (range_w (2^b_x - 1))), clamped to
// [0.1, 10]. Unclamped, it equalizes the two component MSEs.
LayerScale OptimalScale(const BoundarySet& theta, BitWidths bits);

// (s W, x / s); the full-precision product is unchanged.
std::pair<Tensor2D, Tensor2D> ApplyScale(const Tensor2D& w, const Tensor2D& x, double s);

// Bounds seen by the quantizers of the scaled tensors: activations
// (alpha_x / s, beta_x / s), weights (s alpha_w, s beta_w). UnscaleBounds is
// the inverse map.
BoundarySet ScaleBounds(const BoundarySet& theta, double s);
BoundarySet UnscaleBounds(const BoundarySet& scaled, double s);

QuantizerConfig ActivationConfig(const BoundarySet& theta, BitWidths bits);
QuantizerConfig WeightConfig(const BoundarySet& theta, BitWidths bits);

}  // namespace harmoq

#endif  // HARMOQ_SCALE_HARMONIZER_HPP_
