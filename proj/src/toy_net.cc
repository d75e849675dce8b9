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
#include "harmoq/toy_net.hpp"

#include <cmath>

#include "harmoq/errors.hpp"
#include "harmoq/linalg.hpp"
#include "harmoq/metrics.hpp"
#include "harmoq/scale_harmonizer.hpp"
#include "harmoq/tensor_io.hpp"

namespace harmoq {
namespace {

double ToFloat32(double v) { return static_cast<double>(static_cast<float>(v)); }

Tensor2D RoundToFloat32(const Tensor2D& t) {
  std::vector<double> v(t.values().begin(), t.values().end());
  for (double& x : v) x = ToFloat32(x);
  return Tensor2D(t.rows(), t.cols(), std::move(v));
}

Tensor2D AddBias(Tensor2D y, const std::vector<double>& bias) {
  for (std::size_t r = 0; r < y.rows(); ++r)
    for (std::size_t c = 0; c < y.cols(); ++c) y(r, c) += bias[c];
  return y;
}

Tensor2D StackRows(const std::vector<Tensor2D>& parts) {
  std::size_t rows = 0;
  for (const auto& p : parts) rows += p.rows();
  const std::size_t cols = parts.empty() ? 0 : parts.front().cols();
  std::vector<double> data;
  data.reserve(rows * cols);
  for (const auto& p : parts) data.insert(data.end(), p.values().begin(), p.values().end());
  return Tensor2D(rows, cols, std::move(data));
}

}  // namespace

std::string ActivationKindName(ActivationKind kind) {
  return kind == ActivationKind::kRelu ? "relu" : "gelu";
}

ActivationKind ParseActivationKind(const std::string& name) {
  if (name == "relu") return ActivationKind::kRelu;
  if (name == "gelu") return ActivationKind::kGelu;
  throw ConfigError("unknown activation '" + name + "' (expected relu or gelu)");
}

void ToyNetConfig::Validate() const {
  if (layer_dims.size() < 2) throw ConfigError("toy net: need at least two layer widths");
  for (std::size_t d : layer_dims) {
    if (d < 4) throw ConfigError("toy net: every layer width must be >= 4");
  }
  const std::size_t t = tile();
  if (t * t != layer_dims.front()) {
    throw ConfigError("toy net: first layer width must be a perfect square (tile area)");
  }
  if (layer_dims.back() != layer_dims.front()) {
    throw ConfigError("toy net: last layer width must equal the tile area");
  }
  if (upscale == 0) throw ConfigError("toy net: upscale must be >= 1");
  if (patch_height % (t * upscale) != 0 || patch_width % (t * upscale) != 0) {
    throw ConfigError("toy net: patch size must be divisible by tile * upscale");
  }
  if (!(ridge > 0.0)) throw ConfigError("toy net: ridge must be > 0");
}

std::size_t ToyNetConfig::tile() const {
  const auto t = static_cast<std::size_t>(std::lround(std::sqrt(static_cast<double>(layer_dims.front()))));
  return t;
}

std::vector<LayerQuantization> ToLayerQuantization(const std::vector<LayerQuantState>& states,
                                                   BitWidths bits) {
  std::vector<LayerQuantization> out;
  out.reserve(states.size());
  for (const auto& st : states) {
    LayerQuantization q;
    q.scale = st.scale;
    q.correction = st.correction;
    const BoundarySet scaled = ScaleBounds(st.theta, st.scale);
    if (bits.activation < kFullPrecisionBits) {
      q.activation = QuantizerConfig{bits.activation, scaled.alpha_x, scaled.beta_x};
      q.activation->Validate();
    }
    if (bits.weight < kFullPrecisionBits) {
      q.weight = QuantizerConfig{bits.weight, scaled.alpha_w, scaled.beta_w};
      q.weight->Validate();
    }
    out.push_back(std::move(q));
  }
  return out;
}

ToyNet::ToyNet(ToyNetConfig cfg, std::vector<DenseLayer> layers)
    : cfg_(std::move(cfg)), layers_(std::move(layers)) {
  cfg_.Validate();
  if (layers_.size() != cfg_.num_layers()) throw DimensionError("toy net: layer count mismatch");
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    const auto& l = layers_[i];
    if (l.weight.rows() != cfg_.layer_dims[i + 1] || l.weight.cols() != cfg_.layer_dims[i] ||
        l.bias.size() != l.weight.rows()) {
      throw DimensionError("toy net: layer " + std::to_string(i) + " has the wrong shape");
    }
  }
}

ToyNet ToyNet::Fit(const ToyNetConfig& cfg, const std::vector<ImagePlane>& train_hr) {
  cfg.Validate();
  if (train_hr.empty()) throw DataError("toy net: empty training corpus");
  const std::size_t n_layers = cfg.num_layers();
  std::vector<DenseLayer> layers(n_layers);
  for (std::size_t i = 0; i + 1 < n_layers; ++i) {
    const std::size_t in = cfg.layer_dims[i];
    const std::size_t out = cfg.layer_dims[i + 1];
    const Tensor2D w = Scale(SeededGaussian(out, in, cfg.seed + 17 * (i + 1)),
                             std::sqrt(2.0 / static_cast<double>(in)));
    std::vector<double> bias(out, 0.0);
    if (i == 0) {
      // Centre the first layer on mid-grey input.
      for (std::size_t r = 0; r < out; ++r) {
        double acc = 0.0;
        for (std::size_t c = 0; c < in; ++c) acc += w(r, c);
        bias[r] = -0.5 * acc;
      }
    }
    layers[i] = DenseLayer{RoundToFloat32(w), {}};
    for (double b : bias) layers[i].bias.push_back(ToFloat32(b));
  }
  const std::size_t out_dim = cfg.layer_dims.back();
  layers.back() = DenseLayer{Tensor2D(out_dim, cfg.layer_dims[n_layers - 1]),
                             std::vector<double>(out_dim, 0.0)};
  ToyNet provisional(cfg, layers);

  std::vector<Tensor2D> feats;
  std::vector<Tensor2D> targets;
  for (const auto& hr : train_hr) {
    const ImagePlane lr = Degrade(hr, cfg.upscale);
    Tensor2D x = provisional.Tiles(lr);
    const Tensor2D base = x;
    for (std::size_t i = 0; i + 1 < n_layers; ++i) {
      x = provisional.Activate(AddBias(MatMulTransB(x, layers[i].weight), layers[i].bias));
    }
    feats.push_back(x);
    // Tiles of the target image use the same raster layout as Tiles().
    const std::size_t t = cfg.tile();
    const std::size_t ty = hr.height() / t;
    const std::size_t tx = hr.width() / t;
    Tensor2D target(ty * tx, t * t);
    for (std::size_t a = 0; a < ty; ++a)
      for (std::size_t b = 0; b < tx; ++b)
        for (std::size_t yy = 0; yy < t; ++yy)
          for (std::size_t xx = 0; xx < t; ++xx)
            target(a * tx + b, yy * t + xx) = hr.at(a * t + yy, b * t + xx) - base(a * tx + b, yy * t + xx);
    targets.push_back(std::move(target));
  }
  const Tensor2D h = StackRows(feats);
  const Tensor2D r = StackRows(targets);
  const std::size_t n = h.rows();
  const std::size_t f = h.cols();
  Tensor2D aug(n, f + 1);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < f; ++j) aug(i, j) = h(i, j);
    aug(i, f) = 1.0;
  }
  const Tensor2D gram = AddScaledIdentity(Symmetrize(MatMulTransA(aug, aug)),
                                          cfg.ridge * static_cast<double>(n));
  const Tensor2D rhs = MatMulTransA(r, aug);  // out x (f + 1)
  const Tensor2D sol = CholeskySolve(gram, rhs, 0.0);
  Tensor2D w(out_dim, f);
  std::vector<double> bias(out_dim);
  for (std::size_t o = 0; o < out_dim; ++o) {
    for (std::size_t j = 0; j < f; ++j) w(o, j) = sol(o, j);
    bias[o] = ToFloat32(sol(o, f));
  }
  layers.back() = DenseLayer{RoundToFloat32(w), std::move(bias)};
  return ToyNet(cfg, std::move(layers));
}

Tensor2D ToyNet::Tiles(const ImagePlane& lr) const {
  const ImagePlane up = UpsampleNearest(lr, cfg_.upscale);
  const std::size_t t = cfg_.tile();
  if (up.height() % t != 0 || up.width() % t != 0) {
    throw DimensionError("toy net: upsampled image is not a whole number of tiles");
  }
  const std::size_t ty = up.height() / t;
  const std::size_t tx = up.width() / t;
  Tensor2D tiles(ty * tx, t * t);
  for (std::size_t a = 0; a < ty; ++a)
    for (std::size_t b = 0; b < tx; ++b)
      for (std::size_t yy = 0; yy < t; ++yy)
        for (std::size_t xx = 0; xx < t; ++xx)
          tiles(a * tx + b, yy * t + xx) = up.at(a * t + yy, b * t + xx);
  return tiles;
}

ImagePlane ToyNet::Untile(const Tensor2D& tiles, std::size_t height, std::size_t width) const {
  const std::size_t t = cfg_.tile();
  const std::size_t tx = width / t;
  std::vector<double> v(height * width);
  for (std::size_t y = 0; y < height; ++y)
    for (std::size_t x = 0; x < width; ++x)
      v[y * width + x] = tiles((y / t) * tx + x / t, (y % t) * t + x % t);
  return ImagePlane(height, width, std::move(v));
}

Tensor2D ToyNet::Activate(Tensor2D t) const {
  for (std::size_t r = 0; r < t.rows(); ++r) {
    for (std::size_t c = 0; c < t.cols(); ++c) {
      const double v = t(r, c);
      t(r, c) = cfg_.activation == ActivationKind::kRelu
                    ? std::max(v, 0.0)
                    : 0.5 * v * (1.0 + std::erf(v / std::sqrt(2.0)));
    }
  }
  return t;
}

ImagePlane ToyNet::Forward(const ImagePlane& lr) const {
  return Forward(lr, std::vector<LayerQuantization>{});
}

ImagePlane ToyNet::Forward(const ImagePlane& lr, const std::vector<LayerQuantization>& quant) const {
  if (!quant.empty() && quant.size() != layers_.size()) {
    throw DimensionError("toy net: expected one quantization entry per layer");
  }
  const Tensor2D base = Tiles(lr);
  Tensor2D x = base;
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    const DenseLayer& layer = layers_[i];
    Tensor2D y;
    if (quant.empty()) {
      y = MatMulTransB(x, layer.weight);
    } else {
      const LayerQuantization& q = quant[i];
      Tensor2D w = layer.weight;
      if (q.correction.rows() != 0) w = Add(w, q.correction);
      w = Scale(w, q.scale);
      Tensor2D xs = Scale(x, 1.0 / q.scale);
      if (q.weight) w = FakeQuantize(w, *q.weight);
      if (q.activation) xs = FakeQuantize(xs, *q.activation);
      y = MatMulTransB(xs, w);
    }
    y = AddBias(std::move(y), layer.bias);
    x = i + 1 < layers_.size() ? Activate(std::move(y)) : std::move(y);
  }
  return Untile(Add(base, x), lr.height() * cfg_.upscale, lr.width() * cfg_.upscale);
}

std::vector<Tensor2D> ToyNet::LayerInputs(const std::vector<ImagePlane>& lr) const {
  std::vector<std::vector<Tensor2D>> per_layer(layers_.size());
  for (const auto& img : lr) {
    Tensor2D x = Tiles(img);
    for (std::size_t i = 0; i < layers_.size(); ++i) {
      per_layer[i].push_back(x);
      if (i + 1 < layers_.size()) {
        x = Activate(AddBias(MatMulTransB(x, layers_[i].weight), layers_[i].bias));
      }
    }
  }
  std::vector<Tensor2D> out;
  for (const auto& parts : per_layer) out.push_back(StackRows(parts));
  return out;
}

std::vector<CalibLayer> ToyNet::CalibrationLayers(const std::vector<ImagePlane>& lr) const {
  if (lr.empty()) throw DataError("toy net: empty calibration set");
  const auto inputs = LayerInputs(lr);
  std::vector<CalibLayer> out;
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    CalibLayer layer{"fc" + std::to_string(i), layers_[i].weight, inputs[i], std::nullopt};
    if (i == 0) layer.spatial = SpatialShape{cfg_.tile(), cfg_.tile()};
    out.push_back(std::move(layer));
  }
  return out;
}

void ToyNet::Save(const std::filesystem::path& dir) const {
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    WriteHqt1(dir / ("layer" + std::to_string(i) + "_weight.hqt"), layers_[i].weight);
    WriteHqt1(dir / ("layer" + std::to_string(i) + "_bias.hqt"),
              Tensor2D(1, layers_[i].bias.size(), layers_[i].bias));
  }
}

ToyNet ToyNet::Load(const std::filesystem::path& dir, const ToyNetConfig& cfg) {
  cfg.Validate();
  std::vector<DenseLayer> layers;
  for (std::size_t i = 0; i < cfg.num_layers(); ++i) {
    Tensor2D w = ReadHqt1(dir / ("layer" + std::to_string(i) + "_weight.hqt"));
    const Tensor2D b = ReadHqt1(dir / ("layer" + std::to_string(i) + "_bias.hqt"));
    layers.push_back(DenseLayer{std::move(w), std::vector<double>(b.values().begin(), b.values().end())});
  }
  return ToyNet(cfg, std::move(layers));
}

ImagePlane Degrade(const ImagePlane& hr, std::size_t factor) { return DownsampleBox(hr, factor); }

CorpusScore EvaluateCorpus(const ToyNet& net, const std::vector<ImagePlane>& hr,
                           const std::vector<LayerQuantization>* quant) {
  if (hr.empty()) throw DataError("evaluation: empty corpus");
  CorpusScore score;
  for (const auto& img : hr) {
    const ImagePlane lr = Degrade(img, net.config().upscale);
    const ImagePlane out = quant ? net.Forward(lr, *quant) : net.Forward(lr);
    score.psnr += Psnr(out, img);
    score.ssim += Ssim(out, img);
  }
  score.psnr /= static_cast<double>(hr.size());
  score.ssim /= static_cast<double>(hr.size());
  return score;
}

}  // namespace harmoq
