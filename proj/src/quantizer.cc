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
#include "harmoq/quantizer.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "harmoq/errors.hpp"

namespace harmoq {
namespace {

ClipRange Widen(ClipRange r) {
  if (r.beta - r.alpha < kMinBoundGap) {
    const double mid = 0.5 * (r.alpha + r.beta);
    r.alpha = mid - 0.5 * kMinBoundGap;
    r.beta = mid + 0.5 * kMinBoundGap;
  }
  return r;
}

}  // namespace

void QuantizerConfig::Validate() const {
  if (bits < kMinBits || bits > kMaxBits) {
    throw ConfigError("quantizer: bits must be in [2, 8], got " + std::to_string(bits));
  }
  if (!std::isfinite(alpha) || !std::isfinite(beta)) {
    throw ConfigError("quantizer: clipping bounds must be finite");
  }
  // Small slack so bounds produced by the projection alpha = beta - 0.01 pass.
  if (alpha > beta - kMinBoundGap * (1.0 - 1e-9)) {
    throw ConfigError("quantizer: need alpha <= beta - 0.01, got [" + std::to_string(alpha) +
                      ", " + std::to_string(beta) + "]");
  }
}

double StepSize(const QuantizerConfig& cfg) {
  cfg.Validate();
  return (cfg.beta - cfg.alpha) / cfg.levels();
}

double RoundHalfEven(double v) {
  const double fl = std::floor(v);
  const double diff = v - fl;
  if (diff > 0.5) return fl + 1.0;
  if (diff < 0.5) return fl;
  return std::fmod(fl, 2.0) == 0.0 ? fl : fl + 1.0;
}

int QuantIndex(double z, const QuantizerConfig& cfg) {
  const double step = (cfg.beta - cfg.alpha) / cfg.levels();
  const double t = std::clamp((z - cfg.alpha) / step, 0.0, static_cast<double>(cfg.levels()));
  return static_cast<int>(RoundHalfEven(t));
}

double FakeQuantize(double z, const QuantizerConfig& cfg) {
  if (!std::isfinite(z)) throw DataError("fake_quantize: non-finite input");
  const double step = (cfg.beta - cfg.alpha) / cfg.levels();
  const int n = QuantIndex(z, cfg);
  return std::min(cfg.alpha + n * step, cfg.beta);
}

Tensor2D FakeQuantize(const Tensor2D& z, const QuantizerConfig& cfg) {
  cfg.Validate();
  Tensor2D out = z;
  for (double& v : out.values()) v = FakeQuantize(v, cfg);
  return out;
}

Tensor2D QuantError(const Tensor2D& z, const QuantizerConfig& cfg) {
  cfg.Validate();
  Tensor2D out = z;
  for (double& v : out.values()) v = FakeQuantize(v, cfg) - v;
  return out;
}

double TheoreticalMse(const QuantizerConfig& cfg) {
  cfg.Validate();
  const double range = cfg.beta - cfg.alpha;
  const double levels = cfg.levels();
  return range * range / (12.0 * levels * levels);
}

ClipRange MinMaxBounds(std::span<const double> samples) {
  if (samples.empty()) throw DataError("minmax_bounds: no samples");
  const auto [lo, hi] = std::minmax_element(samples.begin(), samples.end());
  return Widen({*lo, *hi});
}

ClipRange MinMaxBounds(const Tensor2D& samples) { return MinMaxBounds(samples.values()); }

double SortedPercentile(std::span<const double> sorted, double q) {
  if (sorted.empty()) throw DataError("percentile: no samples");
  const double pos = q / 100.0 * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

ClipRange PercentileBounds(std::span<const double> samples, double p) {
  if (!(p > 50.0 && p <= 100.0)) {
    throw ConfigError("percentile_bounds: p must be in (50, 100], got " + std::to_string(p));
  }
  if (samples.size() < 2) throw DataError("percentile_bounds: need at least 2 samples");
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  const double tail = (100.0 - p) / 2.0;
  return Widen({SortedPercentile(sorted, tail), SortedPercentile(sorted, p + tail)});
}

ClipRange PercentileBounds(const Tensor2D& samples, double p) {
  return PercentileBounds(samples.values(), p);
}

ClipRange Symmetrized(ClipRange range) {
  const double m = std::max({std::abs(range.alpha), std::abs(range.beta), 0.5 * kMinBoundGap});
  return {-m, m};
}

}  // namespace harmoq
