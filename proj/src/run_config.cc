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
#include "harmoq/run_config.hpp"

#include <charconv>
#include <limits>
#include <sstream>

#include "harmoq/errors.hpp"
#include "harmoq/tensor_io.hpp"

namespace harmoq {
namespace {

std::string Trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

const ConfigKey* FindKey(const std::string& key) {
  for (const auto& k : ConfigSchema()) {
    if (k.key == key) return &k;
  }
  return nullptr;
}

double ParseReal(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  double out = 0.0;
  try {
    out = std::stod(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != v.size() || v.empty()) throw ConfigError(key + ": expected a number, got '" + v + "'");
  return out;
}

std::size_t ParseCount(const std::string& key, const std::string& v) {
  std::size_t out = 0;
  const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  if (v.empty() || res.ec != std::errc() || res.ptr != v.data() + v.size()) {
    throw ConfigError(key + ": expected a non-negative integer, got '" + v + "'");
  }
  return out;
}

bool ParseBool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw ConfigError(key + ": expected true or false, got '" + v + "'");
}

std::vector<std::size_t> ParseCountList(const std::string& key, const std::string& v) {
  std::vector<std::size_t> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(ParseCount(key, Trim(item)));
  if (out.empty()) throw ConfigError(key + ": expected a comma-separated list");
  return out;
}

void CheckValue(const ConfigKey& k, const std::string& v) {
  switch (k.kind) {
    case ValueKind::kReal: ParseReal(k.key, v); break;
    case ValueKind::kCount: ParseCount(k.key, v); break;
    case ValueKind::kBool: ParseBool(k.key, v); break;
    case ValueKind::kCountList: ParseCountList(k.key, v); break;
    case ValueKind::kText: break;
  }
}

}  // namespace

const std::vector<ConfigKey>& ConfigSchema() {
  static const std::vector<ConfigKey> schema = {
      {"run.seed", ValueKind::kCount, "42", "master seed; corpus splits use seed, seed+1, seed+2"},
      {"run.threads", ValueKind::kCount, "1", "worker threads; 1 is bit-exact"},
      {"run.out", ValueKind::kText, "out", "output directory"},
      {"run.format", ValueKind::kText, "csv", "report format: csv or jsonl"},
      {"paths.corpus", ValueKind::kText, "", "corpus directory (default <out>/corpus)"},
      {"paths.model", ValueKind::kText, "", "model directory (default <out>/model)"},
      {"paths.quant", ValueKind::kText, "", "quantized state directory (default <out>/quant)"},
      {"corpus.train_count", ValueKind::kCount, "64", "training patches for the readout fit"},
      {"corpus.calib_count", ValueKind::kCount, "16", "calibration patches"},
      {"corpus.eval_count", ValueKind::kCount, "16", "held-out evaluation patches"},
      {"corpus.height", ValueKind::kCount, "16", "high-resolution patch height"},
      {"corpus.width", ValueKind::kCount, "16", "high-resolution patch width"},
      {"corpus.edge_density", ValueKind::kReal, "0.5", "fraction of step-edge patches"},
      {"corpus.noise", ValueKind::kReal, "0.01", "additive Gaussian noise std-dev"},
      {"net.layer_dims", ValueKind::kCountList, "16,32,32,16", "layer widths"},
      {"net.activation", ValueKind::kText, "relu", "relu or gelu"},
      {"net.upscale", ValueKind::kCount, "2", "super-resolution factor"},
      {"net.ridge", ValueKind::kReal, "1e-3", "readout ridge strength"},
      {"quant.bits_w", ValueKind::kCount, "2", "weight bit-width"},
      {"quant.bits_a", ValueKind::kCount, "2", "activation bit-width"},
      {"quant.symmetric", ValueKind::kBool, "false", "symmetric clipping ranges"},
      {"quant.global_scale", ValueKind::kBool, "false", "one scale for all layers"},
      {"quant.percentile", ValueKind::kReal, "99.9", "percentile baseline coverage"},
      {"src.lambda", ValueKind::kReal, "1e-2", "ridge penalty of the structural correction"},
      {"src.solver_eps", ValueKind::kReal, "1e-6", "Cholesky stabilizer"},
      {"projection.kind", ValueKind::kText, "laplacian",
       "laplacian, sobel, dct_highpass, learned_basis, random, identity"},
      {"projection.rank", ValueKind::kCount, "0", "projection rows (0 = per-kind default)"},
      {"stats.momentum", ValueKind::kReal, "0.9", "EMA momentum after warmup"},
      {"stats.warmup", ValueKind::kCount, "200", "samples averaged exactly before the EMA"},
      {"stats.batch_size", ValueKind::kCount, "32", "rows per statistics update"},
      {"stats.passes", ValueKind::kCount, "1", "passes over the calibration batch"},
      {"pipeline.tau", ValueKind::kReal, "1e-4", "relative loss change for convergence"},
      {"pipeline.max_iters", ValueKind::kCount, "3000", "cumulative boundary steps"},
      {"pipeline.early_stop_delta", ValueKind::kReal, "1e-5", "early-stop change threshold"},
      {"pipeline.early_stop_patience", ValueKind::kCount, "50", "early-stop patience"},
      {"pipeline.max_consecutive_rollbacks", ValueKind::kCount, "12", "stop after this many"},
      {"pipeline.epsilon_frac", ValueKind::kReal, "0.01", "balance tolerance, fraction of initial MSE"},
      {"pipeline.src_retrigger_factor", ValueKind::kReal, "1.5", "gap multiple that re-applies SRC"},
      {"pipeline.rollback_lr_factor", ValueKind::kReal, "0.5", "learning-rate factor on rollback"},
      {"pipeline.rebalance_period", ValueKind::kCount, "5", "boundary steps per outer iteration"},
      {"pipeline.components", ValueKind::kText, "SRC+HSO+ABR", "enabled steps"},
      {"refiner.lr_init", ValueKind::kReal, "1e-2", "peak learning rate"},
      {"refiner.lr_final", ValueKind::kReal, "1e-4", "final learning rate"},
      {"refiner.warmup_steps", ValueKind::kCount, "300", "linear warmup steps"},
      {"refiner.horizon_steps", ValueKind::kCount, "3000", "cosine decay horizon"},
      {"refiner.grad_clip_norm", ValueKind::kReal, "1.0", "global gradient norm clip"},
      {"refiner.adam_beta1", ValueKind::kReal, "0.9", "Adam beta1"},
      {"refiner.adam_beta2", ValueKind::kReal, "0.999", "Adam beta2"},
      {"refiner.adam_eps", ValueKind::kReal, "1e-8", "Adam epsilon"},
      {"refiner.weight_decay", ValueKind::kReal, "0", "decoupled decay on boundaries"},
      {"sensitivity.weight_bits", ValueKind::kCount, "4", "weight bits of the weight-only mode"},
      {"sensitivity.activation_bits", ValueKind::kCount, "4",
       "activation bits of the activation-only mode"},
  };
  return schema;
}

RunConfig::RunConfig() {
  for (const auto& k : ConfigSchema()) values_[k.key] = k.default_value;
}

RunConfig RunConfig::FromText(const std::string& text) {
  RunConfig cfg;
  std::stringstream ss(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(ss, line)) {
    ++line_no;
    const std::string t = Trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    cfg.Set(Trim(t.substr(0, eq)), Trim(t.substr(eq + 1)));
  }
  return cfg;
}

RunConfig RunConfig::FromFile(const std::filesystem::path& path) {
  return FromText(ReadTextFile(path));
}

void RunConfig::Set(const std::string& key, const std::string& value) {
  const ConfigKey* k = FindKey(key);
  if (k == nullptr) throw ConfigError("unknown config key '" + key + "'");
  CheckValue(*k, value);
  values_[key] = value;
}

const std::string& RunConfig::Get(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) throw ConfigError("unknown config key '" + key + "'");
  return it->second;
}

double RunConfig::Real(const std::string& key) const { return ParseReal(key, Get(key)); }
std::size_t RunConfig::Count(const std::string& key) const { return ParseCount(key, Get(key)); }
bool RunConfig::Bool(const std::string& key) const { return ParseBool(key, Get(key)); }
std::vector<std::size_t> RunConfig::CountList(const std::string& key) const {
  return ParseCountList(key, Get(key));
}

std::string RunConfig::ToText() const {
  std::string out;
  for (const auto& k : ConfigSchema()) out += k.key + " = " + Get(k.key) + "\n";
  return out;
}

BitWidths RunConfig::Bits() const {
  return BitWidths{static_cast<int>(Count("quant.bits_a")), static_cast<int>(Count("quant.bits_w"))};
}

PipelineConfig RunConfig::Pipeline() const {
  PipelineConfig p;
  p.tau = Real("pipeline.tau");
  p.max_iters = Count("pipeline.max_iters");
  p.early_stop_delta = Real("pipeline.early_stop_delta");
  p.early_stop_patience = Count("pipeline.early_stop_patience");
  p.max_consecutive_rollbacks = Count("pipeline.max_consecutive_rollbacks");
  p.epsilon_frac = Real("pipeline.epsilon_frac");
  p.src_retrigger_factor = Real("pipeline.src_retrigger_factor");
  p.rollback_lr_factor = Real("pipeline.rollback_lr_factor");
  p.rebalance_period = Count("pipeline.rebalance_period");
  p.enabled = Components::Parse(Get("pipeline.components"));
  p.seed = seed();
  p.bits = Bits();
  p.symmetric = Bool("quant.symmetric");
  p.global_scale = Bool("quant.global_scale");
  p.src.lambda = Real("src.lambda");
  p.src.solver_eps = Real("src.solver_eps");
  p.projection = ParseProjectionKind(Get("projection.kind"));
  p.projection_rank = Count("projection.rank");
  p.stats_momentum = Real("stats.momentum");
  p.stats_warmup = Count("stats.warmup");
  p.stats_batch_size = Count("stats.batch_size");
  p.stats_passes = Count("stats.passes");
  p.threads = Count("run.threads");
  RefinerConfig& r = p.refiner;
  r.lr_init = Real("refiner.lr_init");
  r.lr_final = Real("refiner.lr_final");
  r.warmup_steps = Count("refiner.warmup_steps");
  r.horizon_steps = Count("refiner.horizon_steps");
  r.grad_clip_norm = Real("refiner.grad_clip_norm");
  r.steps_per_round = p.rebalance_period;
  r.adam_beta1 = Real("refiner.adam_beta1");
  r.adam_beta2 = Real("refiner.adam_beta2");
  r.adam_eps = Real("refiner.adam_eps");
  r.weight_decay = Real("refiner.weight_decay");
  return p;
}

ToyNetConfig RunConfig::Net() const {
  ToyNetConfig n;
  n.layer_dims = CountList("net.layer_dims");
  n.activation = ParseActivationKind(Get("net.activation"));
  n.upscale = Count("net.upscale");
  n.patch_height = Count("corpus.height");
  n.patch_width = Count("corpus.width");
  n.seed = seed();
  n.ridge = Real("net.ridge");
  return n;
}

void RunConfig::Validate() const {
  const std::string& format = Get("run.format");
  if (format != "csv" && format != "jsonl") {
    throw ConfigError("run.format: expected csv or jsonl, got '" + format + "'");
  }
  if (Count("run.threads") == 0) throw ConfigError("run.threads must be >= 1");
  Pipeline().Validate();
  Net().Validate();
  for (Split s : {Split::kTrain, Split::kCalib, Split::kEval}) CorpusFor(*this, s).Validate();
  const double p = Real("quant.percentile");
  if (!(p > 50.0 && p <= 100.0)) throw ConfigError("quant.percentile must lie in (50, 100]");
  for (const char* key : {"sensitivity.weight_bits", "sensitivity.activation_bits"}) {
    const std::size_t b = Count(key);
    if (b < static_cast<std::size_t>(kMinBits) ||
        (b > static_cast<std::size_t>(kMaxBits) && b < static_cast<std::size_t>(kFullPrecisionBits))) {
      throw ConfigError(std::string(key) + ": expected 2..8 or >= 16 (full precision)");
    }
  }
}

std::string SplitName(Split split) {
  switch (split) {
    case Split::kTrain: return "train";
    case Split::kCalib: return "calib";
    case Split::kEval: return "eval";
  }
  return "";
}

CorpusConfig CorpusFor(const RunConfig& cfg, Split split) {
  CorpusConfig c;
  c.height = cfg.Count("corpus.height");
  c.width = cfg.Count("corpus.width");
  c.edge_density = cfg.Real("corpus.edge_density");
  c.noise = cfg.Real("corpus.noise");
  switch (split) {
    case Split::kTrain:
      c.count = cfg.Count("corpus.train_count");
      c.seed = cfg.seed();
      break;
    case Split::kCalib:
      c.count = cfg.Count("corpus.calib_count");
      c.seed = cfg.seed() + 1;
      break;
    case Split::kEval:
      c.count = cfg.Count("corpus.eval_count");
      c.seed = cfg.seed() + 2;
      break;
  }
  return c;
}

std::vector<ImagePlane> DegradeAll(const std::vector<ImagePlane>& hr, std::size_t factor) {
  std::vector<ImagePlane> out;
  out.reserve(hr.size());
  for (const auto& img : hr) out.push_back(Degrade(img, factor));
  return out;
}

Scenario BuildScenario(const RunConfig& cfg) {
  cfg.Validate();
  auto train = GenerateCorpus(CorpusFor(cfg, Split::kTrain));
  auto calib = GenerateCorpus(CorpusFor(cfg, Split::kCalib));
  auto eval = GenerateCorpus(CorpusFor(cfg, Split::kEval));
  const ToyNetConfig net_cfg = cfg.Net();
  ToyNet net = ToyNet::Fit(net_cfg, train);
  auto layers = net.CalibrationLayers(DegradeAll(calib, net_cfg.upscale));
  return Scenario{std::move(train), std::move(calib), std::move(eval), std::move(net),
                  std::move(layers)};
}

}  // namespace harmoq
