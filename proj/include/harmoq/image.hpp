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
#ifndef HARMOQ_IMAGE_HPP_
#define HARMOQ_IMAGE_HPP_

#include <cstddef>
#include <filesystem>
#include <vector>

#include "harmoq/tensor.hpp"

namespace harmoq {

// Single-channel image with values in [0, 1] (clamped on construction).
class ImagePlane {
 public:
  ImagePlane() = default;
  ImagePlane(std::size_t height, std::size_t width);
  ImagePlane(std::size_t height, std::size_t width, std::vector<double> values);

  std::size_t height() const { return height_; }
  std::size_t width() const { return width_; }
  double at(std::size_t y, std::size_t x) const { return values_[y * width_ + x]; }
  const std::vector<double>& values() const { return values_; }

  bool operator==(const ImagePlane&) const = default;

 private:
  std::size_t height_ = 0;
  std::size_t width_ = 0;
  std::vector<double> values_;
};

ImagePlane UpsampleNearest(const ImagePlane& image, std::size_t factor);
// Box-filter downsampling; dimensions must be divisible by factor.
ImagePlane DownsampleBox(const ImagePlane& image, std::size_t factor);

// Binary PGM (P5, maxval 255). Values map linearly: v = byte / 255.
void WritePgm(const std::filesystem::path& path, const ImagePlane& image);
ImagePlane ReadPgm(const std::filesystem::path& path);

// Images as rows-of-pixels HQT1 tensors (height x width).
Tensor2D ToTensor(const ImagePlane& image);
ImagePlane FromTensor(const Tensor2D& t);

}  // namespace harmoq

#endif  // HARMOQ_IMAGE_HPP_
