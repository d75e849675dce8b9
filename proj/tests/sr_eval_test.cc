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
#include <vector>

#include <gtest/gtest.h>

#include "harmoq/corpus.hpp"
#include "harmoq/errors.hpp"
#include "harmoq/image.hpp"
#include "harmoq/metrics.hpp"
#include "harmoq/sensitivity.hpp"
#include "harmoq/tensor_io.hpp"
#include "harmoq/toy_net.hpp"
#include "test_support.hpp"

namespace harmoq {
namespace {

ImagePlane RandomImage(std::size_t h, std::size_t w, std::uint64_t seed, double lo = 0.0,
                       double hi = 1.0) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(lo, hi);
  std::vector<double> v(h * w);
  for (double& x : v) x = dist(rng);
  return ImagePlane(h, w, std::move(v));
}

ImagePlane Offset(const ImagePlane& a, double delta) {
  std::vector<double> v = a.values();
  for (double& x : v) x += delta;
  return ImagePlane(a.height(), a.width(), std::move(v));
}

ImagePlane Constant(std::size_t n, double value) {
  return ImagePlane(n, n, std::vector<double>(n * n, value));
}

struct Fixture {
  std::vector<ImagePlane> train;
  std::vector<ImagePlane> hr;
  ToyNet net;
  std::vector<CalibLayer> calib;
};

const Fixture& SharedFixture() {
  static const Fixture f = [] {
    CorpusConfig cc;
    cc.count = 24;
    cc.seed = 5;
    const auto train = GenerateCorpus(cc);
    cc.count = 6;
    cc.seed = 6;
    const auto hr = GenerateCorpus(cc);
    ToyNetConfig nc;
    ToyNet net = ToyNet::Fit(nc, train);
    std::vector<ImagePlane> lr;
    for (const auto& img : hr) lr.push_back(Degrade(img, nc.upscale));
    auto calib = net.CalibrationLayers(lr);
    return Fixture{train, hr, std::move(net), std::move(calib)};
  }();
  return f;
}

TEST(Image, ClampsAndRejectsNan) {
  const ImagePlane img(1, 3, {-0.5, 0.5, 1.5});
  EXPECT_EQ(img.values(), (std::vector<double>{0.0, 0.5, 1.0}));
  EXPECT_THROW(ImagePlane(1, 1, {std::nan("")}), DataError);
  EXPECT_THROW(ImagePlane(2, 2, {0.0}), DimensionError);
}

TEST(Image, ResamplingAndTensorRoundTrip) {
  const ImagePlane img = RandomImage(4, 6, 1);
  const ImagePlane up = UpsampleNearest(img, 2);
  EXPECT_EQ(up.height(), 8u);
  EXPECT_EQ(up.at(3, 5), img.at(1, 2));
  const ImagePlane back = DownsampleBox(up, 2);
  for (std::size_t i = 0; i < img.values().size(); ++i)
    EXPECT_NEAR(back.values()[i], img.values()[i], 1e-15);
  EXPECT_THROW(DownsampleBox(img, 4), DimensionError);
  EXPECT_EQ(FromTensor(ToTensor(img)), img);
}

TEST(Image, PgmRoundTrip) {
  const auto dir = testing::FreshTempDir("pgm");
  std::vector<double> v(12);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = static_cast<double>(i * 20) / 255.0;
  const ImagePlane img(3, 4, v);
  WritePgm(dir / "a.pgm", img);
  const auto bytes = ReadFileBytes(dir / "a.pgm");
  EXPECT_EQ(std::string(bytes.begin(), bytes.begin() + 11), "P5\n4 3\n255\n");
  EXPECT_EQ(ReadPgm(dir / "a.pgm"), img);
  WriteTextFile(dir / "b.pgm", "P5\n1 1\n65535\n\x01\x02");
  EXPECT_THROW(ReadPgm(dir / "b.pgm"), IoError);
  WriteTextFile(dir / "c.pgm", "P2\n1 1\n255\n1");
  EXPECT_THROW(ReadPgm(dir / "c.pgm"), IoError);
  EXPECT_THROW(ReadPgm(dir / "missing.pgm"), IoError);
}

TEST(Psnr, Examples) {
  const ImagePlane a = RandomImage(12, 12, 2, 0.0, 0.9);
  EXPECT_EQ(Psnr(a, a), kPsnrCap);
  EXPECT_NEAR(Psnr(a, Offset(a, 0.1)), 20.0, 1e-9);
  const ImagePlane b = RandomImage(12, 12, 3);
  double acc = 0.0;
  for (std::size_t i = 0; i < a.values().size(); ++i) {
    const double d = a.values()[i] - b.values()[i];
    acc += d * d;
  }
  EXPECT_NEAR(Psnr(a, b), 10.0 * std::log10(144.0 / acc), 1e-10);
  EXPECT_THROW(Psnr(a, RandomImage(12, 11, 3)), DimensionError);
}

TEST(Psnr, DecreasesWithNoiseAmplitude) {
  const ImagePlane clean = Constant(32, 0.5);
  const ImagePlane unit_noise = RandomImage(32, 32, 4, -1.0, 1.0);
  double prev = kPsnrCap + 1.0;
  for (double amp : {0.01, 0.03, 0.1, 0.2, 0.4}) {
    std::vector<double> v(clean.values());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] += amp * unit_noise.values()[i];
    const double p = Psnr(clean, ImagePlane(32, 32, v));
    EXPECT_LT(p, prev);
    prev = p;
  }
}

TEST(Ssim, SelfSymmetryAndErrors) {
  const ImagePlane a = RandomImage(16, 20, 5);
  const ImagePlane b = RandomImage(16, 20, 6);
  EXPECT_EQ(Ssim(a, a), 1.0);
  EXPECT_NEAR(Ssim(a, b), Ssim(b, a), 1e-12);
  EXPECT_LT(Ssim(a, b), 0.5);
  EXPECT_THROW(Ssim(RandomImage(10, 20, 7), RandomImage(10, 20, 8)), DimensionError);
}

TEST(Ssim, ConstantPatchesClosedForm) {
  const double c1 = 1e-4, c2 = 9e-4;
  const double want = (2.0 * 0.2 * 0.8 + c1) * c2 / ((0.04 + 0.64 + c1) * c2);
  EXPECT_NEAR(Ssim(Constant(16, 0.2), Constant(16, 0.8)), want, 1e-12);
}

TEST(Corpus, DeterministicOnPixelGrid) {
  CorpusConfig cc;
  cc.count = 10;
  const auto a = GenerateCorpus(cc);
  EXPECT_EQ(a, GenerateCorpus(cc));
  cc.seed = 43;
  EXPECT_NE(a, GenerateCorpus(cc));
  ASSERT_EQ(a.size(), 10u);
  for (const auto& img : a) {
    EXPECT_EQ(img.height(), 16u);
    for (double v : img.values()) EXPECT_EQ(v, std::round(v * 255.0) / 255.0);
  }
  cc.edge_density = 2.0;
  EXPECT_THROW(GenerateCorpus(cc), ConfigError);
}

TEST(Corpus, EdgeDensityControlsEdges) {
  // Noise-free step-edge patches are piecewise constant with at most three
  // levels; textures and ramps are not.
  auto piecewise = [](const CorpusConfig& cc) {
    int count = 0;
    for (const auto& img : GenerateCorpus(cc)) {
      const std::set<double> levels(img.values().begin(), img.values().end());
      if (levels.size() <= 3) ++count;
    }
    return count;
  };
  CorpusConfig cc;
  cc.count = 40;
  cc.noise = 0.0;
  cc.edge_density = 1.0;
  EXPECT_EQ(piecewise(cc), 40);
  cc.edge_density = 0.0;
  EXPECT_LT(piecewise(cc), 10);
  EXPECT_EQ(EdgeFraction(Constant(8, 0.3)), 0.0);
}

TEST(ToyNet, FitIsDeterministicAndBeatsUpsampling) {
  const Fixture& f = SharedFixture();
  const ToyNet again = ToyNet::Fit(ToyNetConfig{}, f.train);
  for (std::size_t i = 0; i < again.layers().size(); ++i) {
    EXPECT_EQ(again.layers()[i].weight, f.net.layers()[i].weight);
    EXPECT_EQ(again.layers()[i].bias, f.net.layers()[i].bias);
  }
  double nearest = 0.0;
  for (const auto& img : f.train) nearest += Psnr(UpsampleNearest(Degrade(img, 2), 2), img);
  nearest /= static_cast<double>(f.train.size());
  double fitted = 0.0;
  for (const auto& img : f.train) fitted += Psnr(f.net.Forward(Degrade(img, 2)), img);
  fitted /= static_cast<double>(f.train.size());
  EXPECT_GT(fitted, nearest);
}

TEST(ToyNet, ForwardIsDeterministic) {
  const Fixture& f = SharedFixture();
  const ImagePlane lr = Degrade(f.hr[0], 2);
  EXPECT_EQ(f.net.Forward(lr), f.net.Forward(lr));
  const auto quant = ToLayerQuantization(MinMaxStates(f.calib), {2, 2});
  EXPECT_EQ(f.net.Forward(lr, quant), f.net.Forward(lr, quant));
}

TEST(ToyNet, EightBitQuantizationTracksFullPrecision) {
  const Fixture& f = SharedFixture();
  const auto quant = ToLayerQuantization(MinMaxStates(f.calib), {8, 8});
  const CorpusScore fp = EvaluateCorpus(f.net, f.hr);
  const CorpusScore q = EvaluateCorpus(f.net, f.hr, &quant);
  EXPECT_NEAR(q.psnr, fp.psnr, 0.2);
  const auto coarse = ToLayerQuantization(MinMaxStates(f.calib), {4, 4});
  EXPECT_GT(q.psnr, EvaluateCorpus(f.net, f.hr, &coarse).psnr);
}

TEST(ToyNet, GridAlignedOperandsMatchFullPrecision) {
  ToyNetConfig cfg;
  cfg.layer_dims = {4, 4};
  cfg.patch_height = cfg.patch_width = 4;
  const Tensor2D w = Tensor2D::FromRows(
      {{0.5, -0.5, 1.5, -1.5}, {-1.5, 0.5, 0.5, 0.5}, {1.5, 1.5, -0.5, -0.5}, {0.5, 0.5, 0.5, 0.5}});
  const ToyNet net(cfg, {DenseLayer{w, {0.1, -0.2, 0.0, 0.05}}});
  const ImagePlane lr(2, 2, {0.0, 0.25, 0.5, 0.75});
  LayerQuantization q;
  q.activation = QuantizerConfig{2, 0.0, 0.75};
  q.weight = QuantizerConfig{2, -1.5, 1.5};
  EXPECT_EQ(net.Forward(lr, {q}), net.Forward(lr));
}

TEST(ToyNet, SaveLoadRoundTrip) {
  const Fixture& f = SharedFixture();
  const auto dir = testing::FreshTempDir("toy_net");
  f.net.Save(dir);
  const ToyNet loaded = ToyNet::Load(dir, f.net.config());
  const ImagePlane lr = Degrade(f.hr[1], 2);
  EXPECT_EQ(loaded.Forward(lr), f.net.Forward(lr));
  EXPECT_THROW(ToyNet::Load(dir / "missing", f.net.config()), IoError);
}

TEST(ToyNet, CalibrationLayersShapes) {
  const Fixture& f = SharedFixture();
  ASSERT_EQ(f.calib.size(), 3u);
  EXPECT_EQ(f.calib[0].name, "fc0");
  EXPECT_EQ(f.calib[0].inputs.rows(), f.hr.size() * 16u);
  EXPECT_EQ(f.calib[0].inputs.cols(), 16u);
  EXPECT_EQ(f.calib[1].inputs.cols(), 32u);
  ASSERT_TRUE(f.calib[0].spatial.has_value());
  EXPECT_FALSE(f.calib[1].spatial.has_value());
}

TEST(ToyNetConfig, Validation) {
  ToyNetConfig cfg;
  cfg.layer_dims = {15, 32, 15};
  EXPECT_THROW(cfg.Validate(), ConfigError);
  cfg.layer_dims = {16, 32, 9};
  EXPECT_THROW(cfg.Validate(), ConfigError);
  cfg.layer_dims = {16, 32, 16};
  cfg.patch_height = 12;
  EXPECT_THROW(cfg.Validate(), ConfigError);
  EXPECT_EQ(ParseActivationKind("gelu"), ActivationKind::kGelu);
  EXPECT_THROW(ParseActivationKind("tanh"), ConfigError);
}

TEST(Sensitivity, DisabledActivationSide) {
  const Fixture& f = SharedFixture();
  const auto report = SensitivityAnalysis(f.net, f.hr, f.calib, {32, 4}, {32, 4});
  for (const auto& row : report.layers) {
    ASSERT_GT(row.weight_mse, 0.0);
    EXPECT_EQ(row.weight_share, 0.5);
  }
  const auto w_only = LayerContributions(f.net, f.hr, f.calib, {32, 4});
  const auto a_off = LayerContributions(f.net, f.hr, f.calib, {32, 32});
  for (std::size_t i = 0; i < w_only.size(); ++i) {
    EXPECT_GT(w_only[i], 0.0);
    EXPECT_EQ(a_off[i], 0.0);
  }
  const auto r = SensitivityAnalysis(f.net, f.hr, f.calib, {32, 4}, {32, 32});
  for (const auto& row : r.layers) {
    EXPECT_EQ(row.activation_mse, 0.0);
    EXPECT_EQ(row.weight_share, 1.0);
    EXPECT_EQ(row.activation_share, 0.0);
  }
}

TEST(Sensitivity, MatchesIndependentSingleModeRuns) {
  const Fixture& f = SharedFixture();
  const BitWidths w_only{32, 4}, a_only{4, 32};
  const auto report = SensitivityAnalysis(f.net, f.hr, f.calib, w_only, a_only);
  ASSERT_EQ(report.layers.size(), 3u);
  ASSERT_EQ(report.modes.size(), 3u);
  EXPECT_EQ(report.modes[0].mode, "fp");
  EXPECT_EQ(report.modes[1].mode, "W4A32");
  EXPECT_EQ(report.modes[2].mode, "W32A4");

  for (std::size_t i = 0; i < 3; ++i) {
    // Oracle: quantize only layer i by hand and measure the output change.
    for (const BitWidths bits : {w_only, a_only}) {
      std::vector<LayerQuantization> quant(3);
      const auto all = ToLayerQuantization(MinMaxStates(f.calib), bits);
      quant[i] = all[i];
      double acc = 0.0;
      for (const auto& img : f.hr) {
        const ImagePlane lr = Degrade(img, 2);
        acc += MeanSquaredError(f.net.Forward(lr, quant), f.net.Forward(lr));
      }
      const double want = acc / static_cast<double>(f.hr.size());
      const double got = bits.weight == 4 ? report.layers[i].weight_mse : report.layers[i].activation_mse;
      EXPECT_NEAR(got, want, 1e-12 * std::max(1.0, want));
    }
    const auto& row = report.layers[i];
    EXPECT_NEAR(row.weight_share + row.activation_share, 1.0, 1e-12);
  }
  for (std::size_t m = 1; m < 3; ++m) {
    const BitWidths bits = m == 1 ? w_only : a_only;
    const auto quant = ToLayerQuantization(MinMaxStates(f.calib), bits);
    const CorpusScore s = EvaluateCorpus(f.net, f.hr, &quant);
    EXPECT_NEAR(report.modes[m].psnr, s.psnr, 1e-12);
    EXPECT_NEAR(report.modes[m].ssim, s.ssim, 1e-12);
  }
  EXPECT_EQ(ModeLabel({8, 2}), "W2A8");
}

}  // namespace
}  // namespace harmoq
