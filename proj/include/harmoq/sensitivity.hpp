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
#ifndef HARMOQ_SENSITIVITY_HPP_
#define HARMOQ_SENSITIVITY_HPP_

#include <string>
#include <vector>

#include "harmoq/pipeline.hpp"
#include "harmoq/toy_net.hpp"

namespace harmoq {

// "W4A32" style label.
std::string ModeLabel(BitWidths bits);

// Mean squared difference between quantized and full-precision outputs over
// the corpus (low-resolution inputs are Degrade(hr)).
double OutputMse(const ToyNet& net, const std::vector<ImagePlane>& hr,
                 const std::vector<LayerQuantization>& quant);

// Output MSE per layer when only that layer is quantized with `bits`, using
// MinMax bounds from the calibration taps. Sides at >= kFullPrecisionBits are
// left in full precision.
std::vector<double> LayerContributions(const ToyNet& net, const std::vector<ImagePlane>& hr,
                                       const std::vector<CalibLayer>& calib, BitWidths bits);

struct LayerSensitivity {
  std::string layer;
  double weight_mse = 0.0;
  double activation_mse = 0.0;
  double weight_share = 0.0;  // weight_mse / (weight_mse + activation_mse); 0 if both are 0
  double activation_share = 0.0;
};

struct ModeScore {
  std::string mode;
  double psnr = 0.0;
  double ssim = 0.0;
  double output_mse = 0.0;  // against the full-precision output
};

struct SensitivityReport {
  std::vector<LayerSensitivity> layers;
  std::vector<ModeScore> modes;  // fp, weight-only, activation-only
};

SensitivityReport SensitivityAnalysis(const ToyNet& net, const std::vector<ImagePlane>& hr,
                                      const std::vector<CalibLayer>& calib,
                                      BitWidths weight_only = BitWidths{32, 4},
                                      BitWidths activation_only = BitWidths{4, 32});

}  // namespace harmoq

#endif  // HARMOQ_SENSITIVITY_HPP_
