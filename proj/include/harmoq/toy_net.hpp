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
#ifndef HARMOQ_TOY_NET_HPP_
#define HARMOQ_TOY_NET_HPP_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "harmoq/image.hpp"
#include "harmoq/pipeline.hpp"
#include "harmoq/quantizer.hpp"
#include "harmoq/tensor.hpp"

namespace harmoq {

enum class ActivationKind { kRelu, kGelu };

std::string ActivationKindName(ActivationKind kind);
ActivationKind ParseActivationKind(const std::string& name);

// Dense layers over flattened t x t tiles of the nearest-neighbour upsampled
// input, t * t = layer_dims.front() = layer_dims.back(). The last layer
// predicts a residual that is added to the upsampled tile.
struct ToyNetConfig {
  std::vector<std::size_t> layer_dims{16, 32, 32, 16};
  ActivationKind activation = ActivationKind::kRelu;
  std::size_t upscale = 2;
  std::size_t patch_height = 16;  // high-resolution patch size
  std::size_t patch_width = 16;
  std::uint64_t seed = 42;
  double ridge = 1e-3;  // readout fit regularizer, relative to sample count

  void Validate() const;
  std::size_t tile() const;
  std::size_t num_layers() const { return layer_dims.size() - 1; }
};

struct DenseLayer {
  Tensor2D weight;           // out x in
  std::vector<double> bias;  // out, kept in full precision
};

// Bit widths above this are treated as full precision (e.g. W4A32).
inline constexpr int kFullPrecisionBits = 16;

// Quantizers of one layer in the scaled frame: y = Q(s (W + C)) Q(x / s) + b.
// A missing config leaves that side in full precision.
struct LayerQuantization {
  std::optional<QuantizerConfig> activation;
  std::optional<QuantizerConfig> weight;
  double scale = 1.0;
  Tensor2D correction;  // empty for none
};

std::vector<LayerQuantization> ToLayerQuantization(const std::vector<LayerQuantState>& states,
                                                   BitWidths bits);

class ToyNet {
 public:
  ToyNet(ToyNetConfig cfg, std::vector<DenseLayer> layers);

  // Hidden layers are seeded random features; the readout is a ridge fit of
  // the high-resolution residual on `train_hr`. Parameters are rounded to
  // float32 so that saved models reload bit-exactly.
  static ToyNet Fit(const ToyNetConfig& cfg, const std::vector<ImagePlane>& train_hr);

  const ToyNetConfig& config() const { return cfg_; }
  const std::vector<DenseLayer>& layers() const { return layers_; }

  ImagePlane Forward(const ImagePlane& lr) const;
  ImagePlane Forward(const ImagePlane& lr, const std::vector<LayerQuantization>& quant) const;

  // Full-precision input of every layer, one row per tile, images in order.
  std::vector<Tensor2D> LayerInputs(const std::vector<ImagePlane>& lr) const;
  std::vector<CalibLayer> CalibrationLayers(const std::vector<ImagePlane>& lr) const;

  void Save(const std::filesystem::path& dir) const;
  static ToyNet Load(const std::filesystem::path& dir, const ToyNetConfig& cfg);

 private:
  Tensor2D Tiles(const ImagePlane& lr) const;
  ImagePlane Untile(const Tensor2D& tiles, std::size_t height, std::size_t width) const;
  Tensor2D Activate(Tensor2D t) const;

  ToyNetConfig cfg_;
  std::vector<DenseLayer> layers_;
};

ImagePlane Degrade(const ImagePlane& hr, std::size_t factor);

struct CorpusScore {
  double psnr = 0.0;
  double ssim = 0.0;
};

// Mean PSNR/SSIM of net(Degrade(hr)) against hr, accumulated in corpus order.
CorpusScore EvaluateCorpus(const ToyNet& net, const std::vector<ImagePlane>& hr,
                           const std::vector<LayerQuantization>* quant = nullptr);

}  // namespace harmoq

#endif  // HARMOQ_TOY_NET_HPP_
