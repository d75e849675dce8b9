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
#include "harmoq/calibration_stats.hpp"

#include "harmoq/errors.hpp"

namespace harmoq {
namespace {

// dst <- a * dst + b * src
void Blend(Tensor2D& dst, double a, const Tensor2D& src, double b) {
  auto dv = dst.values();
  auto sv = src.values();
  for (std::size_t i = 0; i < dv.size(); ++i) dv[i] = a * dv[i] + b * sv[i];
}

}  // namespace

CalibStats::CalibStats(std::size_t dim, double momentum, std::size_t warmup)
    : dim_(dim),
      momentum_(momentum),
      warmup_(warmup),
      running_{Tensor2D(dim, dim), Tensor2D(dim, dim), Tensor2D(dim, dim)} {
  if (dim == 0) throw DimensionError("calib_stats: dimension must be >= 1");
  if (!(momentum >= 0.0 && momentum < 1.0)) {
    throw ConfigError("calib_stats: momentum must be in [0, 1)");
  }
}

void CalibStats::Update(const Tensor2D& x_batch, const Tensor2D& dx_batch) {
  RequireSameShape(x_batch, dx_batch, "calib_stats update");
  const std::size_t n = x_batch.rows();
  if (n == 0) return;
  if (x_batch.cols() != dim_) {
    throw DimensionError("calib_stats: batch width " + std::to_string(x_batch.cols()) +
                         " does not match dimension " + std::to_string(dim_));
  }

  const double inv_n = 1.0 / static_cast<double>(n);
  const Tensor2D batch_xx = Scale(MatMulTransA(x_batch, x_batch), inv_n);
  const Tensor2D batch_dx = Scale(MatMulTransA(dx_batch, x_batch), inv_n);
  const Tensor2D batch_dd = Scale(MatMulTransA(dx_batch, dx_batch), inv_n);

  if (samples_seen_ < warmup_) {
    // Exact running mean weighted by sample counts.
    const double total = static_cast<double>(samples_seen_ + n);
    const double keep = static_cast<double>(samples_seen_) / total;
    const double add = static_cast<double>(n) / total;
    Blend(running_.xx, keep, batch_xx, add);
    Blend(running_.dx, keep, batch_dx, add);
    Blend(running_.dd, keep, batch_dd, add);
  } else {
    Blend(running_.xx, momentum_, batch_xx, 1.0 - momentum_);
    Blend(running_.dx, momentum_, batch_dx, 1.0 - momentum_);
    Blend(running_.dd, momentum_, batch_dd, 1.0 - momentum_);
  }
  samples_seen_ += n;
}

SecondMoments CalibStats::Finalize() const {
  if (samples_seen_ < warmup_ || samples_seen_ == 0) {
    throw StateError("calib_stats: finalize after " + std::to_string(samples_seen_) +
                     " samples, need " + std::to_string(warmup_));
  }
  return {Symmetrize(running_.xx), running_.dx, Symmetrize(running_.dd)};
}

}  // namespace harmoq
