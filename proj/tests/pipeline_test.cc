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
#include <cmath>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "harmoq/errors.hpp"
#include "harmoq/pipeline.hpp"
#include "json.hpp"
#include "test_support.hpp"

namespace harmoq {
namespace {

std::vector<CalibLayer> SyntheticLayers(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<CalibLayer> layers;
  layers.push_back({"a", testing::RandomTensor(6, 8, rng), testing::RandomTensor(96, 8, rng, 0.0, 1.0),
                    std::nullopt});
  Tensor2D skewed = testing::RandomTensor(96, 6, rng, 0.0, 1.0);
  for (double& v : skewed.values()) v = v * v * 3.0;
  layers.push_back({"b", testing::RandomTensor(4, 6, rng, -0.4, 0.4), skewed, std::nullopt});
  return layers;
}

PipelineConfig SmallConfig() {
  PipelineConfig cfg;
  cfg.max_iters = 200;
  cfg.refiner.lr_init = 0.05;
  cfg.refiner.warmup_steps = 10;
  cfg.refiner.horizon_steps = 200;
  return cfg;
}

TEST(Components, LabelAndParse) {
  EXPECT_EQ(Components{}.Label(), "SRC+HSO+ABR");
  EXPECT_EQ((Components{false, false, false}.Label()), "none");
  EXPECT_EQ(Components::Parse("abr, src"), (Components{true, false, true}));
  EXPECT_EQ(Components::Parse("none"), (Components{false, false, false}));
  EXPECT_THROW(Components::Parse("SRC+XYZ"), ConfigError);
  const auto all = AllComponentSubsets();
  ASSERT_EQ(all.size(), 8u);
  EXPECT_EQ(all.front().Label(), "none");
  EXPECT_EQ(all.back().Label(), "SRC+HSO+ABR");
  std::set<std::string> labels;
  for (const auto& c : all) labels.insert(c.Label());
  EXPECT_EQ(labels.size(), 8u);
}

TEST(RunHarmoq, DisabledComponentsKeepMinMax) {
  const auto layers = SyntheticLayers(1);
  PipelineConfig cfg = SmallConfig();
  cfg.enabled = {false, false, false};
  const PipelineResult r = RunHarmoq(layers, cfg);
  const auto minmax = MinMaxStates(layers);
  ASSERT_EQ(r.states.size(), minmax.size());
  for (std::size_t i = 0; i < minmax.size(); ++i) EXPECT_EQ(r.states[i], minmax[i]);
  EXPECT_EQ(r.final_loss, r.initial_loss);
  EXPECT_EQ(r.initial_loss, ModelLoss(layers, minmax, cfg.bits));
  EXPECT_TRUE(r.converged);
}

TEST(RunHarmoq, DeterministicAndMonotone) {
  const auto layers = SyntheticLayers(2);
  const PipelineConfig cfg = SmallConfig();
  const PipelineResult a = RunHarmoq(layers, cfg);
  const PipelineResult b = RunHarmoq(layers, cfg);
  EXPECT_EQ(a.trace.ToJsonLines(), b.trace.ToJsonLines());
  EXPECT_EQ(a.states, b.states);
  ASSERT_FALSE(a.trace.records.empty());
  double prev = a.initial_loss;
  for (const auto& rec : a.trace.records) {
    EXPECT_LE(rec.accepted_loss, prev);
    prev = rec.accepted_loss;
  }
  EXPECT_EQ(a.final_loss, prev);
  EXPECT_LT(a.final_loss, a.initial_loss);
  EXPECT_EQ(a.final_loss, ModelLoss(layers, a.states, cfg.bits));
}

TEST(RunHarmoq, ThreadCountDoesNotChangeResult) {
  const auto layers = SyntheticLayers(3);
  PipelineConfig cfg = SmallConfig();
  const PipelineResult one = RunHarmoq(layers, cfg);
  cfg.threads = 4;
  const PipelineResult four = RunHarmoq(layers, cfg);
  EXPECT_NEAR(four.final_loss, one.final_loss, 1e-6 * one.final_loss);
}

TEST(RunHarmoq, TraceRecordsCarryRequiredFields) {
  const auto layers = SyntheticLayers(4);
  const PipelineResult r = RunHarmoq(layers, SmallConfig());
  std::istringstream lines(r.trace.ToJsonLines());
  std::string line;
  std::size_t count = 0;
  while (std::getline(lines, line)) {
    const auto j = nlohmann::json::parse(line);
    for (const char* key : {"iter", "loss", "gap", "s_per_layer", "rollback", "src_reapplied"}) {
      EXPECT_TRUE(j.contains(key)) << key;
    }
    EXPECT_EQ(j["s_per_layer"].size(), layers.size());
    EXPECT_EQ(j["iter"].get<std::size_t>(), ++count);
  }
  EXPECT_EQ(count, r.trace.records.size());
  EXPECT_FALSE(r.trace.stop_reason.empty());
}

TEST(RunHarmoq, GlobalScaleAndSymmetricModes) {
  const auto layers = SyntheticLayers(5);
  PipelineConfig cfg = SmallConfig();
  cfg.global_scale = true;
  const PipelineResult g = RunHarmoq(layers, cfg);
  EXPECT_EQ(g.states[0].scale, g.states[1].scale);
  EXPECT_LE(g.final_loss, g.initial_loss);

  cfg = SmallConfig();
  cfg.symmetric = true;
  const PipelineResult s = RunHarmoq(layers, cfg);
  for (const auto& st : s.states) {
    EXPECT_DOUBLE_EQ(st.theta.alpha_x, -st.theta.beta_x);
    EXPECT_DOUBLE_EQ(st.theta.alpha_w, -st.theta.beta_w);
  }
}

TEST(RunHarmoq, Errors) {
  EXPECT_THROW(RunHarmoq({}, SmallConfig()), DataError);
  auto layers = SyntheticLayers(6);
  layers[0].inputs = Tensor2D(0, 8);
  EXPECT_THROW(RunHarmoq(layers, SmallConfig()), DataError);
  PipelineConfig bad = SmallConfig();
  bad.tau = 0.0;
  EXPECT_THROW(RunHarmoq(SyntheticLayers(6), bad), ConfigError);
}

TEST(LayerStatistics, ExactMomentsOfQuantizationError) {
  const auto layers = SyntheticLayers(7);
  const auto states = MinMaxStates(layers);
  const PipelineConfig cfg = SmallConfig();
  const SecondMoments m = LayerStatistics(layers[0], states[0], cfg);
  const Tensor2D dx = QuantError(layers[0].inputs, ActivationConfig(states[0].theta, cfg.bits));
  const double n = static_cast<double>(layers[0].inputs.rows());
  const Tensor2D want_dx = Scale(MatMulTransA(dx, layers[0].inputs), 1.0 / n);
  EXPECT_LT(MaxAbs(Subtract(m.dx, want_dx)), 1e-14);
}

TEST(EnforceBalance, ThresholdRule) {
  LayerQuantState st;
  st.theta = {0.0, 2.0, -0.3, 0.3};
  const BitWidths bits{2, 2};
  const double gap = BalanceGap(1.0, st.theta, bits);
  ASSERT_GT(gap, 0.0);

  auto [same, none] = EnforceBalance(st, bits, gap);
  EXPECT_EQ(same, st);
  EXPECT_EQ(none, BalanceActions{});

  auto [rescaled, a1] = EnforceBalance(st, bits, gap / 1.2);
  EXPECT_TRUE(a1.rescaled);
  EXPECT_FALSE(a1.src_reapply);
  EXPECT_FALSE(rescaled.scale_clamped);
  const double mse = ComponentMse(QuantSide::kActivation, rescaled.scale, st.theta, bits);
  EXPECT_LE(BalanceGap(rescaled.scale, st.theta, bits), 1e-15 * mse);

  auto [again, a2] = EnforceBalance(st, bits, gap / 1.6);
  EXPECT_TRUE(a2.rescaled);
  EXPECT_TRUE(a2.src_reapply);
}

TEST(EnforceBalance, ZeroGapIsNoop) {
  LayerQuantState st;
  st.theta = {0.0, 1.0, 0.0, 1.0};
  const auto [out, actions] = EnforceBalance(st, {3, 3}, 1e-9);
  EXPECT_EQ(BalanceGap(1.0, st.theta, {3, 3}), 0.0);
  EXPECT_EQ(out, st);
  EXPECT_FALSE(actions.rescaled);
}

TEST(AblationRun, EightRowsOnIdenticalInputs) {
  const auto layers = SyntheticLayers(8);
  PipelineConfig cfg = SmallConfig();
  std::size_t evaluated = 0;
  const auto rows = AblationRun(layers, cfg, AllComponentSubsets(),
                                [&](const std::vector<LayerQuantState>&) {
                                  ++evaluated;
                                  return std::make_pair(30.0, 0.9);
                                });
  ASSERT_EQ(rows.size(), 8u);
  EXPECT_EQ(evaluated, 8u);
  for (const auto& row : rows) {
    EXPECT_EQ(row.input_digest, rows.front().input_digest);
    EXPECT_EQ(row.psnr, 30.0);
  }
  EXPECT_EQ(rows.front().input_digest, CalibrationDigest(layers));
  EXPECT_EQ(rows.front().final_loss, ModelLoss(layers, MinMaxStates(layers), cfg.bits));
  cfg.enabled = Components{};
  EXPECT_EQ(rows.back().final_loss, RunHarmoq(layers, cfg).final_loss);
}

TEST(BuildProjections, SobelFallsBackWithoutSpatialShape) {
  auto layers = SyntheticLayers(9);
  layers[0].inputs = Tensor2D(4, 16);
  layers[0].weight = Tensor2D(3, 16);
  layers[0].spatial = SpatialShape{4, 4};
  PipelineConfig cfg;
  cfg.projection = ProjectionKind::kSobel;
  const auto p = BuildProjections(layers, cfg);
  EXPECT_EQ(p[0].kind, ProjectionKind::kSobel);
  EXPECT_EQ(p[0].rank(), 8u);
  EXPECT_EQ(p[1].kind, ProjectionKind::kLaplacian);
  EXPECT_EQ(p[1].rank(), 4u);
}

}  // namespace
}  // namespace harmoq
