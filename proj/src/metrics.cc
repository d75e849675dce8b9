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
#include "harmoq/metrics.hpp"

#include <array>
#include <cmath>

#include "harmoq/errors.hpp"

namespace harmoq {
namespace {

constexpr int kWindow = 11;
constexpr double kSigma = 1.5;
constexpr double kC1 = (0.01 * 1.0) * (0.01 * 1.0);
constexpr double kC2 = (0.03 * 1.0) * (0.03 * 1.0);

std::array<double, kWindow * kWindow> GaussianWindow() {
  std::array<double, kWindow * kWindow> w{};
  double total = 0.0;
  const int r = kWindow / 2;
  for (int y = -r; y <= r; ++y) {
    for (int x = -r; x <= r; ++x) {
      const double v = std::exp(-(x * x + y * y) / (2.0 * kSigma * kSigma));
      w[(y + r) * kWindow + (x + r)] = v;
      total += v;
    }
  }
  for (double& v : w) v /= total;
  return w;
}

void RequireSameSize(const ImagePlane& a, const ImagePlane& b) {
  if (a.height() != b.height() || a.width() != b.width()) {
    throw DimensionError("image metrics: size mismatch");
  }
}

}  // namespace

double MeanSquaredError(const ImagePlane& a, const ImagePlane& b) {
  RequireSameSize(a, b);
  if (a.values().empty()) throw DimensionError("image metrics: empty image");
  double acc = 0.0;
  for (std::size_t i = 0; i < a.values().size(); ++i) {
    const double d = a.values()[i] - b.values()[i];
    acc += d * d;
  }
  return acc / static_cast<double>(a.values().size());
}

double Psnr(const ImagePlane& a, const ImagePlane& b) {
  const double mse = MeanSquaredError(a, b);
  if (mse <= 0.0) return kPsnrCap;
  return std::min(kPsnrCap, 10.0 * std::log10(1.0 / mse));
}

double Ssim(const ImagePlane& a, const ImagePlane& b) {
  RequireSameSize(a, b);
  if (a.height() < static_cast<std::size_t>(kWindow) ||
      a.width() < static_cast<std::size_t>(kWindow)) {
    throw DimensionError("ssim: image smaller than the 11x11 window");
  }
  static const auto window = GaussianWindow();
  const std::size_t out_h = a.height() - kWindow + 1;
  const std::size_t out_w = a.width() - kWindow + 1;
  double total = 0.0;
  for (std::size_t y = 0; y < out_h; ++y) {
    for (std::size_t x = 0; x < out_w; ++x) {
      double mu_a = 0.0, mu_b = 0.0, aa = 0.0, bb = 0.0, ab = 0.0;
      for (int wy = 0; wy < kWindow; ++wy) {
        for (int wx = 0; wx < kWindow; ++wx) {
          const double g = window[wy * kWindow + wx];
          const double va = a.at(y + wy, x + wx);
          const double vb = b.at(y + wy, x + wx);
          mu_a += g * va;
          mu_b += g * vb;
          aa += g * va * va;
          bb += g * vb * vb;
          ab += g * va * vb;
        }
      }
      const double var_a = aa - mu_a * mu_a;
      const double var_b = bb - mu_b * mu_b;
      const double cov = ab - mu_a * mu_b;
      const double num = (2.0 * mu_a * mu_b + kC1) * (2.0 * cov + kC2);
      const double den = (mu_a * mu_a + mu_b * mu_b + kC1) * (var_a + var_b + kC2);
      total += num / den;
    }
  }
  return total / static_cast<double>(out_h * out_w);
}

}  // namespace harmoq
