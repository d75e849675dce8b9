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
#include "harmoq/scale_harmonizer.hpp"

#include <algorithm>
#include <cmath>

#include "harmoq/errors.hpp"

namespace harmoq {
namespace {

double Levels(int bits) { return static_cast<double>((1 << bits) - 1); }

}  // namespace

void BoundarySet::Validate() const {
  QuantizerConfig{kMinBits, alpha_x, beta_x}.Validate();
  QuantizerConfig{kMinBits, alpha_w, beta_w}.Validate();
}

double ComponentMse(QuantSide side, double s, const BoundarySet& theta, BitWidths bits) {
  if (!(s > 0.0)) throw ConfigError("component_mse: scale must be > 0");
  if (side == QuantSide::kActivation) {
    const double range = theta.range_x();
    const double levels = Levels(bits.activation);
    return range * range / (12.0 * s * s * levels * levels);
  }
  const double range = theta.range_w();
  const double levels = Levels(bits.weight);
  return range * range * s * s / (12.0 * levels * levels);
}

double BalanceGap(double s, const BoundarySet& theta, BitWidths bits) {
  return std::abs(ComponentMse(QuantSide::kActivation, s, theta, bits) -
                  ComponentMse(QuantSide::kWeight, s, theta, bits));
}

LayerScale OptimalScale(const BoundarySet& theta, BitWidths bits) {
  theta.Validate();
  LayerScale out;
  out.raw = std::sqrt(theta.range_x() * Levels(bits.weight) /
                      (theta.range_w() * Levels(bits.activation)));
  out.s = std::clamp(out.raw, kMinScale, kMaxScale);
  out.clamped = out.s != out.raw;
  return out;
}

std::pair<Tensor2D, Tensor2D> ApplyScale(const Tensor2D& w, const Tensor2D& x, double s) {
  if (!(s > 0.0)) throw ConfigError("apply_scale: scale must be > 0");
  return {Scale(w, s), Scale(x, 1.0 / s)};
}

BoundarySet ScaleBounds(const BoundarySet& theta, double s) {
  return {theta.alpha_x / s, theta.beta_x / s, theta.alpha_w * s, theta.beta_w * s};
}

BoundarySet UnscaleBounds(const BoundarySet& scaled, double s) {
  return {scaled.alpha_x * s, scaled.beta_x * s, scaled.alpha_w / s, scaled.beta_w / s};
}

QuantizerConfig ActivationConfig(const BoundarySet& theta, BitWidths bits) {
  return {bits.activation, theta.alpha_x, theta.beta_x};
}

QuantizerConfig WeightConfig(const BoundarySet& theta, BitWidths bits) {
  return {bits.weight, theta.alpha_w, theta.beta_w};
}

}  // namespace harmoq
