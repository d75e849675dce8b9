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
#ifndef HARMOQ_QUANTIZER_HPP_
#define HARMOQ_QUANTIZER_HPP_

#include <span>

#include "harmoq/tensor.hpp"

namespace harmoq {

// Minimum clipping-range width. Shared by bound initialization and the
// feasibility projection of the boundary refiner.
inline constexpr double kMinBoundGap = 0.01;
inline constexpr int kMinBits = 2;
inline constexpr int kMaxBits = 8;

// Uniform affine grid alpha + n * step, n in [0, 2^bits - 1].
struct QuantizerConfig {
  int bits = 8;
  double alpha = 0.0;
  double beta = 1.0;

  // Throws ConfigError unless 2 <= bits <= 8 and alpha <= beta - 0.01.
  void Validate() const;
  int levels() const { return (1 << bits) - 1; }  // 2^b - 1
};

struct ClipRange {
  double alpha = 0.0;
  double beta = 0.0;
};

double StepSize(const QuantizerConfig& cfg);

// Round half to even, independent of the floating-point environment.
double RoundHalfEven(double v);

// Index n of the grid level z maps to.
int QuantIndex(double z, const QuantizerConfig& cfg);
double FakeQuantize(double z, const QuantizerConfig& cfg);
Tensor2D FakeQuantize(const Tensor2D& z, const QuantizerConfig& cfg);

// fake_quantize(z) - z.
Tensor2D QuantError(const Tensor2D& z, const QuantizerConfig& cfg);

// (beta - alpha)^2 / (12 (2^b - 1)^2)
double TheoreticalMse(const QuantizerConfig& cfg);

// Ranges narrower than kMinBoundGap are widened symmetrically about their
// midpoint. Throw DataError on empty input.
ClipRange MinMaxBounds(std::span<const double> samples);
ClipRange MinMaxBounds(const Tensor2D& samples);

// Two-sided percentile clipping: tails of (100 - p) / 2 percent each, linear
// interpolation on sorted data. p must lie in (50, 100].
ClipRange PercentileBounds(std::span<const double> samples, double p);
ClipRange PercentileBounds(const Tensor2D& samples, double p);

// Linear-interpolation percentile (q in [0, 100]) of already sorted data.
double SortedPercentile(std::span<const double> sorted, double q);

// Symmetric-grid variant: beta = -alpha = max(|alpha|, |beta|).
ClipRange Symmetrized(ClipRange range);

}  // namespace harmoq

#endif  // HARMOQ_QUANTIZER_HPP_
