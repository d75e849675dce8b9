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
#include "harmoq/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <thread>

#include "harmoq/digest.hpp"
#include "harmoq/errors.hpp"
#include "json.hpp"

namespace harmoq {
namespace {

// Runs fn(i) for i in [0, n). Each index touches only its own slot, so the
// result does not depend on the thread count.
template <typename Fn>
void ForEachLayer(std::size_t n, std::size_t threads, Fn&& fn) {
  if (threads <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(n);
  const std::size_t workers = std::min(threads, n);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < n; i += workers) {
        try {
          fn(i);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

BoundarySet BoundsFrom(ClipRange act, ClipRange wt, bool symmetric) {
  if (symmetric) {
    act = Symmetrized(act);
    wt = Symmetrized(wt);
  }
  return {act.alpha, act.beta, wt.alpha, wt.beta};
}

BoundarySet SymmetrizedBounds(const BoundarySet& t) {
  return BoundsFrom({t.alpha_x, t.beta_x}, {t.alpha_w, t.beta_w}, true);
}

Tensor2D Deployed(const CalibLayer& layer, const LayerQuantState& state) {
  return state.correction.empty() ? layer.weight : Add(layer.weight, state.correction);
}

double LayerLoss(const CalibLayer& layer, const LayerQuantState& state, BitWidths bits) {
  const Tensor2D deployed = Deployed(layer, state);
  return TotalLoss(LayerOperands{layer.weight, deployed, layer.inputs}, state.scale,
                   ScaleBounds(state.theta, state.scale), bits);
}

double InitialModelMse(const BoundarySet& theta, BitWidths bits) {
  return ComponentMse(QuantSide::kActivation, 1.0, theta, bits) +
         ComponentMse(QuantSide::kWeight, 1.0, theta, bits);
}

// Pooled bounds across layers for the single-scale mode.
BoundarySet PooledBounds(const std::vector<LayerQuantState>& states) {
  BoundarySet pooled = states.front().theta;
  for (const auto& s : states) {
    pooled.alpha_x = std::min(pooled.alpha_x, s.theta.alpha_x);
    pooled.beta_x = std::max(pooled.beta_x, s.theta.beta_x);
    pooled.alpha_w = std::min(pooled.alpha_w, s.theta.alpha_w);
    pooled.beta_w = std::max(pooled.beta_w, s.theta.beta_w);
  }
  return pooled;
}

void ApplyHarmonizedScales(std::vector<LayerQuantState>& states, const PipelineConfig& cfg) {
  if (cfg.global_scale) {
    const LayerScale ls = OptimalScale(PooledBounds(states), cfg.bits);
    for (auto& s : states) {
      s.scale = ls.s;
      s.scale_clamped = ls.clamped;
    }
    return;
  }
  for (auto& s : states) {
    const LayerScale ls = OptimalScale(s.theta, cfg.bits);
    s.scale = ls.s;
    s.scale_clamped = ls.clamped;
  }
}

Tensor2D SrcCorrection(const CalibLayer& layer, const LayerQuantState& state,
                       const ProjectionMatrix& projection, const PipelineConfig& cfg) {
  const SecondMoments stats = LayerStatistics(layer, state, cfg);
  // Solved in the scaled frame for s W; mapped back to the unscaled weights.
  const Tensor2D scaled =
      ComputeSrcCorrection(Scale(layer.weight, state.scale), stats, projection, cfg.src, layer.name);
  return Scale(scaled, 1.0 / state.scale);
}

// A recomputed correction replaces the current one only if it does not raise
// the layer's fixed-batch loss.
void UpdateCorrection(const CalibLayer& layer, LayerQuantState& state,
                      const ProjectionMatrix& projection, const PipelineConfig& cfg) {
  LayerQuantState trial = state;
  trial.correction = SrcCorrection(layer, state, projection, cfg);
  if (LayerLoss(layer, trial, cfg.bits) <= LayerLoss(layer, state, cfg.bits)) state = std::move(trial);
}

struct Snapshot {
  std::vector<LayerQuantState> states;
  std::vector<AdamState> adam;
};

}  // namespace

std::string Components::Label() const {
  std::string out;
  auto add = [&](bool on, const char* name) {
    if (!on) return;
    if (!out.empty()) out += "+";
    out += name;
  };
  add(src, "SRC");
  add(hso, "HSO");
  add(abr, "ABR");
  return out.empty() ? "none" : out;
}

Components Components::Parse(const std::string& text) {
  Components c{false, false, false};
  std::string token;
  auto flush = [&] {
    std::string t;
    for (char ch : token) {
      if (!std::isspace(static_cast<unsigned char>(ch))) t += static_cast<char>(std::toupper(ch));
    }
    token.clear();
    if (t.empty() || t == "NONE") return;
    if (t == "SRC") c.src = true;
    else if (t == "HSO") c.hso = true;
    else if (t == "ABR") c.abr = true;
    else throw ConfigError("unknown pipeline component '" + t + "'");
  };
  for (char ch : text) {
    if (ch == ',' || ch == '+') flush();
    else token += ch;
  }
  flush();
  return c;
}

std::vector<Components> AllComponentSubsets() {
  std::vector<Components> out;
  for (int mask = 0; mask < 8; ++mask) {
    out.push_back({(mask & 1) != 0, (mask & 2) != 0, (mask & 4) != 0});
  }
  std::stable_sort(out.begin(), out.end(), [](const Components& a, const Components& b) {
    return (a.src + a.hso + a.abr) < (b.src + b.hso + b.abr);
  });
  return out;
}

void PipelineConfig::Validate() const {
  if (!(tau > 0.0)) throw ConfigError("pipeline: tau must be > 0");
  if (!(epsilon_frac > 0.0)) throw ConfigError("pipeline: epsilon_frac must be > 0");
  if (rebalance_period < 1) throw ConfigError("pipeline: rebalance_period must be >= 1");
  if (max_iters < 1) throw ConfigError("pipeline: max_iters must be >= 1");
  if (!(rollback_lr_factor > 0.0 && rollback_lr_factor < 1.0)) {
    throw ConfigError("pipeline: rollback_lr_factor must be in (0, 1)");
  }
  if (!(src_retrigger_factor >= 1.0)) {
    throw ConfigError("pipeline: src_retrigger_factor must be >= 1");
  }
  if (bits.activation < kMinBits || bits.activation > kMaxBits || bits.weight < kMinBits ||
      bits.weight > kMaxBits) {
    throw ConfigError("pipeline: bit-widths must be in [2, 8]");
  }
  if (stats_batch_size < 1 || stats_passes < 1) {
    throw ConfigError("pipeline: stats batch size and passes must be >= 1");
  }
  src.Validate();
  refiner.Validate();
}

std::string PipelineTrace::ToJsonLines() const {
  std::ostringstream out;
  for (const auto& r : records) {
    nlohmann::ordered_json j;
    j["iter"] = r.iter;
    j["loss"] = r.loss;
    j["gap"] = r.gap;
    j["s_per_layer"] = r.s_per_layer;
    j["rollback"] = r.rollback;
    j["src_reapplied"] = r.src_reapplied;
    j["accepted_loss"] = r.accepted_loss;
    j["correction_norm"] = r.correction_norm;
    j["scale_clamped"] = r.scale_clamped;
    j["layers_rolled_back"] = r.layers_rolled_back;
    j["lr_scale"] = r.lr_scale;
    j["abr_steps"] = r.abr_steps;
    out << j.dump() << "\n";
  }
  return out.str();
}

std::vector<LayerQuantState> MinMaxStates(const std::vector<CalibLayer>& layers, bool symmetric) {
  std::vector<LayerQuantState> out;
  for (const auto& layer : layers) {
    LayerQuantState s;
    s.theta = BoundsFrom(MinMaxBounds(layer.inputs), MinMaxBounds(layer.weight), symmetric);
    s.correction = Tensor2D(layer.weight.rows(), layer.weight.cols());
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<LayerQuantState> PercentileStates(const std::vector<CalibLayer>& layers, double p,
                                              bool symmetric) {
  std::vector<LayerQuantState> out;
  for (const auto& layer : layers) {
    LayerQuantState s;
    s.theta = BoundsFrom(PercentileBounds(layer.inputs, p), PercentileBounds(layer.weight, p),
                         symmetric);
    s.correction = Tensor2D(layer.weight.rows(), layer.weight.cols());
    out.push_back(std::move(s));
  }
  return out;
}

double ModelLoss(const std::vector<CalibLayer>& layers, const std::vector<LayerQuantState>& states,
                 BitWidths bits) {
  if (layers.size() != states.size()) throw DimensionError("model loss: layer/state count mismatch");
  double total = 0.0;
  for (std::size_t i = 0; i < layers.size(); ++i) total += LayerLoss(layers[i], states[i], bits);
  return total;
}

SecondMoments LayerStatistics(const CalibLayer& layer, const LayerQuantState& state,
                              const PipelineConfig& cfg) {
  const std::size_t n = layer.inputs.rows();
  const std::size_t d = layer.inputs.cols();
  const Tensor2D scaled = Scale(layer.inputs, 1.0 / state.scale);
  const QuantizerConfig act = ActivationConfig(ScaleBounds(state.theta, state.scale), cfg.bits);
  const Tensor2D error = QuantError(scaled, act);

  const std::size_t total = n * cfg.stats_passes;
  CalibStats stats(d, cfg.stats_momentum, std::min(cfg.stats_warmup, total));
  for (std::size_t pass = 0; pass < cfg.stats_passes; ++pass) {
    for (std::size_t start = 0; start < n; start += cfg.stats_batch_size) {
      const std::size_t rows = std::min(cfg.stats_batch_size, n - start);
      std::vector<double> xb(scaled.values().begin() + start * d,
                             scaled.values().begin() + (start + rows) * d);
      std::vector<double> eb(error.values().begin() + start * d,
                             error.values().begin() + (start + rows) * d);
      stats.Update(Tensor2D(rows, d, std::move(xb)), Tensor2D(rows, d, std::move(eb)));
    }
  }
  return stats.Finalize();
}

std::pair<LayerQuantState, BalanceActions> EnforceBalance(const LayerQuantState& state,
                                                          BitWidths bits, double epsilon,
                                                          double retrigger_factor) {
  const double gap = BalanceGap(state.scale, state.theta, bits);
  BalanceActions actions;
  LayerQuantState out = state;
  if (gap <= epsilon) return {out, actions};
  const LayerScale ls = OptimalScale(state.theta, bits);
  out.scale = ls.s;
  out.scale_clamped = ls.clamped;
  actions.rescaled = true;
  actions.src_reapply = gap > retrigger_factor * epsilon;
  return {out, actions};
}

std::vector<ProjectionMatrix> BuildProjections(const std::vector<CalibLayer>& layers,
                                               const PipelineConfig& cfg) {
  std::vector<ProjectionMatrix> out;
  for (std::size_t i = 0; i < layers.size(); ++i) {
    const auto& layer = layers[i];
    ProjectionRequest req;
    req.kind = cfg.projection;
    req.dim = layer.weight.cols();
    req.rank = cfg.projection_rank;
    req.seed = cfg.seed + 1000 * (i + 1);
    req.calib_features = &layer.inputs;
    const bool stencil =
        req.kind == ProjectionKind::kLaplacian || req.kind == ProjectionKind::kSobel;
    if (stencil) {
      // Sobel needs a spatial layout; shapeless layers use the 1D stencil.
      if (req.kind == ProjectionKind::kSobel && !layer.spatial) req.kind = ProjectionKind::kLaplacian;
      req.spatial = layer.spatial;
    }
    if (req.rank != 0) {
      const std::size_t cap = stencil ? AvailableStencilRows(req.kind, req.dim, req.spatial)
                              : req.kind == ProjectionKind::kLearnedBasis ? req.dim - 2
                                                                          : req.dim;
      req.rank = std::min(req.rank, cap);
    }
    out.push_back(MakeProjection(req));
  }
  return out;
}

PipelineResult RunHarmoq(const std::vector<CalibLayer>& layers, const PipelineConfig& cfg) {
  cfg.Validate();
  if (layers.empty()) throw DataError("run_harmoq: model has no layers");
  for (const auto& layer : layers) {
    if (layer.inputs.rows() == 0) throw DataError("run_harmoq: empty calibration set");
    if (layer.inputs.cols() != layer.weight.cols()) {
      throw DimensionError("run_harmoq: layer '" + layer.name + "' input width mismatch");
    }
  }

  const std::size_t n_layers = layers.size();
  const BitWidths bits = cfg.bits;
  const auto projections =
      cfg.enabled.src ? BuildProjections(layers, cfg) : std::vector<ProjectionMatrix>{};

  Snapshot accepted{MinMaxStates(layers, cfg.symmetric), std::vector<AdamState>(n_layers)};
  std::vector<double> epsilon(n_layers);
  for (std::size_t i = 0; i < n_layers; ++i) {
    epsilon[i] = cfg.epsilon_frac * InitialModelMse(accepted.states[i].theta, bits);
  }

  PipelineResult result;
  result.initial_loss = ModelLoss(layers, accepted.states, bits);
  if (!std::isfinite(result.initial_loss)) {
    throw NumericError("run_harmoq: initial loss is not finite");
  }
  result.trace.initial_loss = result.initial_loss;
  double accepted_loss = result.initial_loss;
  std::vector<double> accepted_layer_loss(n_layers);
  for (std::size_t i = 0; i < n_layers; ++i) {
    accepted_layer_loss[i] = LayerLoss(layers[i], accepted.states[i], bits);
  }

  RefinerConfig refiner = cfg.refiner;
  refiner.steps_per_round = cfg.rebalance_period;
  // The loss is a sum of independent per-layer terms, so rollback is decided
  // per layer. A single global scale couples the layers; that mode rolls back
  // all of them together.
  const bool joint_rollback = cfg.global_scale;
  std::vector<double> lr_scale(n_layers, refiner.lr_scale);
  std::size_t abr_steps = 0;
  std::size_t quiet_iters = 0;
  std::size_t consecutive_rollbacks = 0;

  for (std::size_t iter = 1;; ++iter) {
    Snapshot cand = accepted;
    TraceRecord rec;
    rec.iter = iter;

    // Step 1: statistics under the current quantizers, then the correction.
    if (cfg.enabled.src) {
      ForEachLayer(n_layers, cfg.threads, [&](std::size_t i) {
        UpdateCorrection(layers[i], cand.states[i], projections[i], cfg);
      });
    }

    // Step 2: harmonized scale.
    if (cfg.enabled.hso) ApplyHarmonizedScales(cand.states, cfg);

    // Step 3: projected Adam on the boundaries of the scaled quantizers.
    if (cfg.enabled.abr) {
      for (std::size_t step = 0; step < refiner.steps_per_round && abr_steps < cfg.max_iters;
           ++step, ++abr_steps) {
        ForEachLayer(n_layers, cfg.threads, [&](std::size_t i) {
          auto& st = cand.states[i];
          const Tensor2D deployed = Deployed(layers[i], st);
          const BoundarySet scaled = ScaleBounds(st.theta, st.scale);
          const BoundaryVector grad = BoundaryGradients(
              LayerOperands{layers[i].weight, deployed, layers[i].inputs}, st.scale, scaled, bits);
          RefinerConfig layer_cfg = refiner;
          layer_cfg.lr_scale = lr_scale[i];
          auto [adam, next] = RefineStep(cand.adam[i], scaled, grad, layer_cfg, abr_steps);
          cand.adam[i] = adam;
          st.theta = ProjectFeasible(UnscaleBounds(next, st.scale));
          if (cfg.symmetric) st.theta = SymmetrizedBounds(st.theta);
        });
      }
    }

    // Constraint enforcement on the closed-form MSE model.
    if (cfg.enabled.hso) {
      if (cfg.global_scale) {
        double worst = 0.0;
        for (std::size_t i = 0; i < n_layers; ++i) {
          worst = std::max(worst, BalanceGap(cand.states[i].scale, cand.states[i].theta, bits) /
                                      epsilon[i]);
        }
        if (worst > 1.0) {
          ApplyHarmonizedScales(cand.states, cfg);
          if (worst > cfg.src_retrigger_factor && cfg.enabled.src) {
            rec.src_reapplied = true;
            ForEachLayer(n_layers, cfg.threads, [&](std::size_t i) {
              UpdateCorrection(layers[i], cand.states[i], projections[i], cfg);
            });
          }
        }
      } else {
        std::vector<char> reapply(n_layers, 0);
        for (std::size_t i = 0; i < n_layers; ++i) {
          auto [state, actions] =
              EnforceBalance(cand.states[i], bits, epsilon[i], cfg.src_retrigger_factor);
          cand.states[i] = std::move(state);
          reapply[i] = actions.src_reapply && cfg.enabled.src;
        }
        ForEachLayer(n_layers, cfg.threads, [&](std::size_t i) {
          if (reapply[i]) {
            UpdateCorrection(layers[i], cand.states[i], projections[i], cfg);
          }
        });
        rec.src_reapplied = std::any_of(reapply.begin(), reapply.end(), [](char c) { return c; });
      }
    }

    std::vector<double> layer_loss(n_layers);
    ForEachLayer(n_layers, cfg.threads, [&](std::size_t i) {
      layer_loss[i] = LayerLoss(layers[i], cand.states[i], bits);
    });
    double loss = 0.0;
    for (double l : layer_loss) loss += l;
    if (!std::isfinite(loss)) {
      throw NumericError("run_harmoq: non-finite loss at iteration " + std::to_string(iter));
    }

    const double previous_loss = accepted_loss;
    rec.loss = loss;
    std::vector<char> keep(n_layers);
    for (std::size_t i = 0; i < n_layers; ++i) {
      keep[i] = joint_rollback ? loss <= accepted_loss : layer_loss[i] <= accepted_layer_loss[i];
    }
    bool any_kept = false;
    for (std::size_t i = 0; i < n_layers; ++i) {
      if (keep[i]) {
        accepted.states[i] = std::move(cand.states[i]);
        accepted.adam[i] = cand.adam[i];
        accepted_layer_loss[i] = layer_loss[i];
        any_kept = true;
      } else {
        lr_scale[i] *= cfg.rollback_lr_factor;
        rec.rollback = true;
        ++rec.layers_rolled_back;
      }
    }
    accepted_loss = 0.0;
    for (double l : accepted_layer_loss) accepted_loss += l;
    consecutive_rollbacks = any_kept ? 0 : consecutive_rollbacks + 1;
    // Relative change of the accepted loss; iterations in which every layer
    // rolled back count toward the stall limit instead.
    const double change = std::abs(previous_loss - accepted_loss) /
                          std::max(previous_loss, std::numeric_limits<double>::min());
    rec.accepted_loss = accepted_loss;
    rec.lr_scale = lr_scale;
    rec.abr_steps = abr_steps;
    for (std::size_t i = 0; i < n_layers; ++i) {
      const auto& st = accepted.states[i];
      rec.s_per_layer.push_back(st.scale);
      rec.correction_norm.push_back(FrobeniusNorm(st.correction));
      rec.gap = std::max(rec.gap, BalanceGap(st.scale, st.theta, bits));
      rec.scale_clamped = rec.scale_clamped || st.scale_clamped;
    }
    result.trace.records.push_back(rec);

    quiet_iters = change < cfg.early_stop_delta ? quiet_iters + 1 : 0;
    if (any_kept && change < cfg.tau) {
      result.converged = true;
      result.trace.stop_reason = "converged";
      break;
    }
    if (quiet_iters >= cfg.early_stop_patience) {
      result.trace.stop_reason = "early_stop";
      break;
    }
    if (consecutive_rollbacks >= cfg.max_consecutive_rollbacks) {
      result.trace.stop_reason = "stalled";
      break;
    }
    if (iter >= cfg.max_iters || (cfg.enabled.abr && abr_steps >= cfg.max_iters)) {
      result.trace.stop_reason = "max_iters";
      break;
    }
  }

  result.states = std::move(accepted.states);
  result.final_loss = accepted_loss;
  return result;
}

std::string CalibrationDigest(const std::vector<CalibLayer>& layers) {
  Sha256 h;
  for (const auto& layer : layers) {
    h.Update(layer.name);
    h.Update(layer.weight);
    h.Update(layer.inputs);
  }
  return h.Finish();
}

std::vector<AblationRow> AblationRun(const std::vector<CalibLayer>& layers,
                                     const PipelineConfig& cfg,
                                     const std::vector<Components>& subsets,
                                     const StateEvaluator& evaluator) {
  std::vector<AblationRow> rows;
  for (const auto& subset : subsets) {
    PipelineConfig run_cfg = cfg;
    run_cfg.enabled = subset;
    AblationRow row;
    row.subset = subset;
    row.input_digest = CalibrationDigest(layers);
    const PipelineResult res = RunHarmoq(layers, run_cfg);
    row.final_loss = res.final_loss;
    row.iterations = res.trace.records.size();
    if (evaluator) std::tie(row.psnr, row.ssim) = evaluator(res.states);
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace harmoq
