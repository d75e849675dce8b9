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
#ifndef HARMOQ_PIPELINE_HPP_
#define HARMOQ_PIPELINE_HPP_

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "harmoq/boundary_refiner.hpp"
#include "harmoq/calibration_stats.hpp"
#include "harmoq/projection.hpp"
#include "harmoq/scale_harmonizer.hpp"
#include "harmoq/src_calibration.hpp"
#include "harmoq/tensor.hpp"

namespace harmoq {

// A linear layer as seen by calibration: full-precision weights and the fixed
// calibration batch observed at its input.
struct CalibLayer {
  std::string name;
  Tensor2D weight;  // m x d
  Tensor2D inputs;  // n x d
  std::optional<SpatialShape> spatial;
};

struct Components {
  bool src = true;
  bool hso = true;
  bool abr = true;

  // "SRC+HSO+ABR", "none" for the empty set.
  std::string Label() const;
  // Comma- or plus-separated subset of {SRC, HSO, ABR}; "none" or "" is empty.
  static Components Parse(const std::string& text);
  bool operator==(const Components&) const = default;
};

// All 8 subsets, empty set first, full set last.
std::vector<Components> AllComponentSubsets();

struct PipelineConfig {
  double tau = 1e-4;  // relative change in the fixed-batch loss
  std::size_t max_iters = 3000;
  double early_stop_delta = 1e-5;
  std::size_t early_stop_patience = 50;
  std::size_t max_consecutive_rollbacks = 12;
  double epsilon_frac = 0.01;
  double src_retrigger_factor = 1.5;
  double rollback_lr_factor = 0.5;
  std::size_t rebalance_period = 5;
  Components enabled;
  std::uint64_t seed = 42;

  BitWidths bits;
  bool symmetric = false;     // force beta = -alpha on both sides
  bool global_scale = false;  // one s for every layer, from pooled bounds

  SrcConfig src;
  RefinerConfig refiner;
  ProjectionKind projection = ProjectionKind::kLaplacian;
  std::size_t projection_rank = 0;  // 0 = default rule

  double stats_momentum = CalibStats::kDefaultMomentum;
  std::size_t stats_warmup = CalibStats::kDefaultWarmup;
  std::size_t stats_batch_size = 32;
  std::size_t stats_passes = 1;

  std::size_t threads = 1;

  void Validate() const;
};

// theta holds bounds on the unscaled tensors; the quantizers act on x / s and
// s (W + correction) with ScaleBounds(theta, s).
struct LayerQuantState {
  BoundarySet theta;
  double scale = 1.0;
  bool scale_clamped = false;
  Tensor2D correction;  // m x d, added to the full-precision weights
  bool operator==(const LayerQuantState&) const = default;
};

struct TraceRecord {
  std::size_t iter = 0;
  double loss = 0.0;           // fixed-batch loss of this iteration's candidate
  double accepted_loss = 0.0;  // loss of the state kept after the rollback check
  double gap = 0.0;            // max over layers of |MSE_x - MSE_w| (model)
  std::vector<double> s_per_layer;
  std::vector<double> correction_norm;  // ||correction||_F per layer
  bool rollback = false;              // at least one layer kept its previous state
  std::size_t layers_rolled_back = 0;
  bool src_reapplied = false;
  bool scale_clamped = false;
  std::vector<double> lr_scale;  // per layer, after this iteration's rollbacks
  std::size_t abr_steps = 0;  // cumulative
};

struct PipelineTrace {
  double initial_loss = 0.0;
  std::vector<TraceRecord> records;
  std::string stop_reason;

  // One JSON object per iteration: iter, loss, gap, s_per_layer, rollback,
  // src_reapplied (plus accepted_loss, correction_norm, scale_clamped,
  // layers_rolled_back, lr_scale, abr_steps).
  std::string ToJsonLines() const;
};

struct PipelineResult {
  std::vector<LayerQuantState> states;
  PipelineTrace trace;
  double initial_loss = 0.0;
  double final_loss = 0.0;
  bool converged = false;
};

// theta from activation/weight extrema, s = 1, no correction.
std::vector<LayerQuantState> MinMaxStates(const std::vector<CalibLayer>& layers,
                                          bool symmetric = false);
// Two-sided percentile clipping with tails (100 - p) / 2 on both sides.
std::vector<LayerQuantState> PercentileStates(const std::vector<CalibLayer>& layers, double p,
                                              bool symmetric = false);

// Sum over layers of the compound loss on each layer's calibration batch.
double ModelLoss(const std::vector<CalibLayer>& layers, const std::vector<LayerQuantState>& states,
                 BitWidths bits);

// Second moments of the activation error under the layer's current quantizer,
// in the scaled frame.
SecondMoments LayerStatistics(const CalibLayer& layer, const LayerQuantState& state,
                              const PipelineConfig& cfg);

struct BalanceActions {
  bool rescaled = false;
  bool src_reapply = false;
  bool operator==(const BalanceActions&) const = default;
};

// gap <= epsilon: unchanged. gap > epsilon: s <- s*(theta). gap > factor *
// epsilon additionally asks for SRC to be re-applied.
std::pair<LayerQuantState, BalanceActions> EnforceBalance(const LayerQuantState& state,
                                                          BitWidths bits, double epsilon,
                                                          double retrigger_factor = 1.5);

// Outer loop: refresh statistics, structural correction, harmonized scale,
// boundary refinement, balance enforcement, rollback on loss increase.
// Throws DataError on an empty calibration set and NumericError on a
// non-finite loss.
PipelineResult RunHarmoq(const std::vector<CalibLayer>& layers, const PipelineConfig& cfg);

// Builds the per-layer projections RunHarmoq uses.
std::vector<ProjectionMatrix> BuildProjections(const std::vector<CalibLayer>& layers,
                                               const PipelineConfig& cfg);

// Returns (PSNR, SSIM) of a quantized model on held-out data.
using StateEvaluator = std::function<std::pair<double, double>(const std::vector<LayerQuantState>&)>;

struct AblationRow {
  Components subset;
  double final_loss = 0.0;
  double psnr = 0.0;
  double ssim = 0.0;
  std::size_t iterations = 0;
  std::string input_digest;
};

std::vector<AblationRow> AblationRun(const std::vector<CalibLayer>& layers,
                                     const PipelineConfig& cfg,
                                     const std::vector<Components>& subsets,
                                     const StateEvaluator& evaluator = nullptr);

std::string CalibrationDigest(const std::vector<CalibLayer>& layers);

}  // namespace harmoq

#endif  // HARMOQ_PIPELINE_HPP_
