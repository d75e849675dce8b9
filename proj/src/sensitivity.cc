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
#include "harmoq/sensitivity.hpp"

#include "harmoq/errors.hpp"
#include "harmoq/metrics.hpp"

namespace harmoq {
namespace {

std::vector<LayerQuantization> FullModel(const std::vector<CalibLayer>& calib, BitWidths bits) {
  return ToLayerQuantization(MinMaxStates(calib), bits);
}

}  // namespace

std::string ModeLabel(BitWidths bits) {
  return "W" + std::to_string(bits.weight) + "A" + std::to_string(bits.activation);
}

double OutputMse(const ToyNet& net, const std::vector<ImagePlane>& hr,
                 const std::vector<LayerQuantization>& quant) {
  if (hr.empty()) throw DataError("sensitivity: empty corpus");
  double acc = 0.0;
  for (const auto& img : hr) {
    const ImagePlane lr = Degrade(img, net.config().upscale);
    acc += MeanSquaredError(net.Forward(lr, quant), net.Forward(lr));
  }
  return acc / static_cast<double>(hr.size());
}

std::vector<double> LayerContributions(const ToyNet& net, const std::vector<ImagePlane>& hr,
                                       const std::vector<CalibLayer>& calib, BitWidths bits) {
  if (calib.size() != net.layers().size()) {
    throw DimensionError("sensitivity: expected one calibration layer per network layer");
  }
  const auto full = FullModel(calib, bits);
  std::vector<double> out;
  for (std::size_t i = 0; i < full.size(); ++i) {
    std::vector<LayerQuantization> quant(full.size());
    quant[i] = full[i];
    out.push_back(OutputMse(net, hr, quant));
  }
  return out;
}

SensitivityReport SensitivityAnalysis(const ToyNet& net, const std::vector<ImagePlane>& hr,
                                      const std::vector<CalibLayer>& calib,
                                      BitWidths weight_only, BitWidths activation_only) {
  const auto w = LayerContributions(net, hr, calib, weight_only);
  const auto a = LayerContributions(net, hr, calib, activation_only);
  SensitivityReport report;
  for (std::size_t i = 0; i < w.size(); ++i) {
    LayerSensitivity row{calib[i].name, w[i], a[i], 0.0, 0.0};
    const double total = w[i] + a[i];
    if (total > 0.0) {
      row.weight_share = w[i] / total;
      row.activation_share = a[i] / total;
    }
    report.layers.push_back(row);
  }
  const CorpusScore fp = EvaluateCorpus(net, hr);
  report.modes.push_back(ModeScore{"fp", fp.psnr, fp.ssim, 0.0});
  for (BitWidths bits : {weight_only, activation_only}) {
    const auto quant = FullModel(calib, bits);
    const CorpusScore s = EvaluateCorpus(net, hr, &quant);
    report.modes.push_back(ModeScore{ModeLabel(bits), s.psnr, s.ssim, OutputMse(net, hr, quant)});
  }
  return report;
}

}  // namespace harmoq
