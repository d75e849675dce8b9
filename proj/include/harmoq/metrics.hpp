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
#ifndef HARMOQ_METRICS_HPP_
#define HARMOQ_METRICS_HPP_

#include "harmoq/image.hpp"

namespace harmoq {

inline constexpr double kPsnrCap = 100.0;

double MeanSquaredError(const ImagePlane& a, const ImagePlane& b);

// 10 log10(1 / MSE) for unit peak; capped at 100 dB.
double Psnr(const ImagePlane& a, const ImagePlane& b);

// Mean SSIM over every position where an 11x11 Gaussian window (sigma 1.5)
// fits, K1 = 0.01, K2 = 0.03, L = 1. Both images need height and width >= 11.
double Ssim(const ImagePlane& a, const ImagePlane& b);

}  // namespace harmoq

#endif  // HARMOQ_METRICS_HPP_
