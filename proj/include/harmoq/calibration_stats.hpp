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
#ifndef HARMOQ_CALIBRATION_STATS_HPP_
#define HARMOQ_CALIBRATION_STATS_HPP_

#include <cstddef>

#include "harmoq/tensor.hpp"

namespace harmoq {

// Uncentered second moments of a layer's input x and its quantization error
// dx = Q(x) - x:
//   xx = E[x x^T], dx = E[dx x^T], dd = E[dx dx^T]   (all d x d)
struct SecondMoments {
  Tensor2D xx;
  Tensor2D dx;
  Tensor2D dd;
};

// Streaming estimator for SecondMoments. Batches seen while fewer than
// `warmup` samples have been consumed are averaged exactly; every later batch
// folds in as M <- momentum * M + (1 - momentum) * M_batch.
//
// Single writer. Readers may use the result of Finalize() concurrently.
class CalibStats {
 public:
  static constexpr double kDefaultMomentum = 0.9;
  static constexpr std::size_t kDefaultWarmup = 200;

  explicit CalibStats(std::size_t dim, double momentum = kDefaultMomentum,
                      std::size_t warmup = kDefaultWarmup);

  // x_batch and dx_batch are n x d, one sample per row. n = 0 is a no-op.
  void Update(const Tensor2D& x_batch, const Tensor2D& dx_batch);

  // Throws StateError before `warmup` samples have been seen.
  SecondMoments Finalize() const;

  std::size_t dim() const { return dim_; }
  std::size_t samples_seen() const { return samples_seen_; }
  std::size_t warmup() const { return warmup_; }
  double momentum() const { return momentum_; }

 private:
  std::size_t dim_;
  double momentum_;
  std::size_t warmup_;
  std::size_t samples_seen_ = 0;
  SecondMoments running_;
};

}  // namespace harmoq

#endif  // HARMOQ_CALIBRATION_STATS_HPP_
