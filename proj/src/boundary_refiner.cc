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
#include "harmoq/boundary_refiner.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "harmoq/errors.hpp"
#include "harmoq/quantizer.hpp"

namespace harmoq {
namespace {

void CheckOperands(const LayerOperands& layer) {
  RequireSameShape(layer.reference, layer.deployed, "compound loss weights");
  if (layer.inputs.cols() != layer.reference.cols()) {
    throw DimensionError("compound loss: inputs " + layer.inputs.ShapeString() +
                         " do not match weights " + layer.reference.ShapeString());
  }
  if (layer.inputs.rows() == 0) throw DataError("compound loss: empty batch");
}

struct Residual {
  Tensor2D scaled_reference;  // s W_reference, m x d
  Tensor2D scaled_inputs;     // x / s, n x d
  Tensor2D r;                 // n x m
};

// Per-element STE derivative tables: d q / d alpha and d q / d beta.
struct SteTables {
  Tensor2D d_alpha;
  Tensor2D d_beta;
};

Residual ComputeResidual(const LayerOperands& layer, double s, const BoundarySet& theta,
                         BitWidths bits, SteTables* act_ste, SteTables* wt_ste) {
  if (!(s > 0.0)) throw ConfigError("compound loss: scale must be > 0");
  const QuantizerConfig act = ActivationConfig(theta, bits);
  const QuantizerConfig wt = WeightConfig(theta, bits);
  act.Validate();
  wt.Validate();

  Residual out;
  out.scaled_reference = Scale(layer.reference, s);
  out.scaled_inputs = Scale(layer.inputs, 1.0 / s);
  const Tensor2D scaled_deployed = Scale(layer.deployed, s);

  Tensor2D dx = out.scaled_inputs;
  Tensor2D dw = scaled_deployed;
  if (act_ste) *act_ste = {Tensor2D(dx.rows(), dx.cols()), Tensor2D(dx.rows(), dx.cols())};
  if (wt_ste) *wt_ste = {Tensor2D(dw.rows(), dw.cols()), Tensor2D(dw.rows(), dw.cols())};

  {
    auto v = dx.values();
    const double inv_levels = 1.0 / act.levels();
    for (std::size_t i = 0; i < v.size(); ++i) {
      const double z = v[i];
      v[i] = FakeQuantize(z, act) - z;
      if (act_ste) {
        const double frac = QuantIndex(z, act) * inv_levels;
        act_ste->d_alpha.values()[i] = 1.0 - frac;
        act_ste->d_beta.values()[i] = frac;
      }
    }
  }
  {
    auto v = dw.values();
    const auto ref = out.scaled_reference.values();
    const double inv_levels = 1.0 / wt.levels();
    for (std::size_t i = 0; i < v.size(); ++i) {
      const double z = v[i];
      v[i] = FakeQuantize(z, wt) - ref[i];
      if (wt_ste) {
        const double frac = QuantIndex(z, wt) * inv_levels;
        wt_ste->d_alpha.values()[i] = 1.0 - frac;
        wt_ste->d_beta.values()[i] = frac;
      }
    }
  }

  // r_n = (s W) dx_n + dW (x_n / s), stacked as rows.
  out.r = Add(MatMulTransB(dx, out.scaled_reference), MatMulTransB(out.scaled_inputs, dw));
  return out;
}

}  // namespace

void RefinerConfig::Validate() const {
  if (!(lr_final <= lr_init) || !(lr_final >= 0.0)) {
    throw ConfigError("refiner: need 0 <= lr_final <= lr_init");
  }
  if (!(grad_clip_norm > 0.0)) throw ConfigError("refiner: grad_clip_norm must be > 0");
  if (steps_per_round < 1) throw ConfigError("refiner: steps_per_round must be >= 1");
  if (!(adam_beta1 >= 0.0 && adam_beta1 < 1.0) || !(adam_beta2 >= 0.0 && adam_beta2 < 1.0)) {
    throw ConfigError("refiner: Adam betas must be in [0, 1)");
  }
  if (!(adam_eps > 0.0)) throw ConfigError("refiner: adam_eps must be > 0");
  if (!(lr_scale > 0.0)) throw ConfigError("refiner: lr_scale must be > 0");
}

double TotalLoss(const LayerOperands& layer, double s, const BoundarySet& theta, BitWidths bits) {
  CheckOperands(layer);
  const Residual res = ComputeResidual(layer, s, theta, bits, nullptr, nullptr);
  return SquaredFrobeniusNorm(res.r) / static_cast<double>(layer.inputs.rows());
}

double TotalLoss(const Tensor2D& w, const Tensor2D& inputs, double s, const BoundarySet& theta,
                 BitWidths bits) {
  return TotalLoss(LayerOperands{w, w, inputs}, s, theta, bits);
}

BoundaryVector ToVector(const BoundarySet& t) { return {t.alpha_x, t.beta_x, t.alpha_w, t.beta_w}; }

BoundarySet FromVector(const BoundaryVector& v) { return {v[0], v[1], v[2], v[3]}; }

BoundaryVector BoundaryGradients(const LayerOperands& layer, double s, const BoundarySet& theta,
                                 BitWidths bits) {
  CheckOperands(layer);
  SteTables act_ste;
  SteTables wt_ste;
  const Residual res = ComputeResidual(layer, s, theta, bits, &act_ste, &wt_ste);
  const double scale = 2.0 / static_cast<double>(layer.inputs.rows());

  // <R, J (sW)^T> = <R (sW), J> for activation tables J (n x d);
  // <R, X' K^T> = <R^T X', K> for weight tables K (m x d).
  const Tensor2D r_w = MatMul(res.r, res.scaled_reference);
  const Tensor2D rt_x = MatMulTransA(res.r, res.scaled_inputs);
  return {scale * FrobeniusInner(r_w, act_ste.d_alpha), scale * FrobeniusInner(r_w, act_ste.d_beta),
          scale * FrobeniusInner(rt_x, wt_ste.d_alpha), scale * FrobeniusInner(rt_x, wt_ste.d_beta)};
}

BoundaryVector BoundaryGradients(const Tensor2D& w, const Tensor2D& inputs, double s,
                                 const BoundarySet& theta, BitWidths bits) {
  return BoundaryGradients(LayerOperands{w, w, inputs}, s, theta, bits);
}

double LearningRate(const RefinerConfig& cfg, std::size_t step_index) {
  double lr;
  if (step_index < cfg.warmup_steps) {
    lr = cfg.lr_init * static_cast<double>(step_index + 1) / static_cast<double>(cfg.warmup_steps);
  } else {
    const double span = static_cast<double>(
        cfg.horizon_steps > cfg.warmup_steps ? cfg.horizon_steps - cfg.warmup_steps : 1);
    const double progress =
        std::min(1.0, static_cast<double>(step_index - cfg.warmup_steps) / span);
    lr = cfg.lr_final +
         0.5 * (cfg.lr_init - cfg.lr_final) * (1.0 + std::cos(std::numbers::pi * progress));
  }
  return lr * cfg.lr_scale;
}

BoundaryVector ClipGlobalNorm(const BoundaryVector& g, double max_norm) {
  double norm = 0.0;
  for (double v : g) norm += v * v;
  norm = std::sqrt(norm);
  if (norm <= max_norm) return g;
  BoundaryVector out = g;
  const double factor = max_norm / norm;
  for (double& v : out) v *= factor;
  return out;
}

BoundarySet ProjectFeasible(const BoundarySet& theta) {
  BoundarySet out = theta;
  out.alpha_x = std::min(out.alpha_x, out.beta_x - kMinBoundGap);
  out.alpha_w = std::min(out.alpha_w, out.beta_w - kMinBoundGap);
  return out;
}

std::pair<AdamState, BoundarySet> RefineStep(const AdamState& state, const BoundarySet& theta,
                                             const BoundaryVector& gradient,
                                             const RefinerConfig& cfg, std::size_t step_index) {
  cfg.Validate();
  for (double g : gradient) {
    if (!std::isfinite(g)) throw NumericError("refine_step: non-finite gradient");
  }
  const BoundaryVector g = ClipGlobalNorm(gradient, cfg.grad_clip_norm);
  const double lr = LearningRate(cfg, step_index);

  AdamState next = state;
  next.t += 1;
  const double bias1 = 1.0 - std::pow(cfg.adam_beta1, static_cast<double>(next.t));
  const double bias2 = 1.0 - std::pow(cfg.adam_beta2, static_cast<double>(next.t));
  BoundaryVector params = ToVector(theta);
  for (std::size_t i = 0; i < params.size(); ++i) {
    next.m[i] = cfg.adam_beta1 * state.m[i] + (1.0 - cfg.adam_beta1) * g[i];
    next.v[i] = cfg.adam_beta2 * state.v[i] + (1.0 - cfg.adam_beta2) * g[i] * g[i];
    const double m_hat = next.m[i] / bias1;
    const double v_hat = next.v[i] / bias2;
    params[i] -= lr * (m_hat / (std::sqrt(v_hat) + cfg.adam_eps) + cfg.weight_decay * params[i]);
  }
  return {next, ProjectFeasible(FromVector(params))};
}

}  // namespace harmoq
