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
#include "harmoq/image.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "harmoq/errors.hpp"
#include "harmoq/tensor_io.hpp"

namespace harmoq {

ImagePlane::ImagePlane(std::size_t height, std::size_t width)
    : height_(height), width_(width), values_(height * width, 0.0) {}

ImagePlane::ImagePlane(std::size_t height, std::size_t width, std::vector<double> values)
    : height_(height), width_(width), values_(std::move(values)) {
  if (values_.size() != height * width) throw DimensionError("image: value count mismatch");
  for (double& v : values_) {
    if (std::isnan(v)) throw DataError("image: NaN pixel");
    v = std::clamp(v, 0.0, 1.0);
  }
}

ImagePlane UpsampleNearest(const ImagePlane& image, std::size_t factor) {
  if (factor == 0) throw ConfigError("upsample: factor must be >= 1");
  const std::size_t h = image.height() * factor;
  const std::size_t w = image.width() * factor;
  std::vector<double> out(h * w);
  for (std::size_t y = 0; y < h; ++y)
    for (std::size_t x = 0; x < w; ++x) out[y * w + x] = image.at(y / factor, x / factor);
  return ImagePlane(h, w, std::move(out));
}

ImagePlane DownsampleBox(const ImagePlane& image, std::size_t factor) {
  if (factor == 0 || image.height() % factor != 0 || image.width() % factor != 0) {
    throw DimensionError("downsample: image size not divisible by factor");
  }
  const std::size_t h = image.height() / factor;
  const std::size_t w = image.width() / factor;
  std::vector<double> out(h * w, 0.0);
  const double norm = 1.0 / static_cast<double>(factor * factor);
  for (std::size_t y = 0; y < h; ++y) {
    for (std::size_t x = 0; x < w; ++x) {
      double acc = 0.0;
      for (std::size_t dy = 0; dy < factor; ++dy)
        for (std::size_t dx = 0; dx < factor; ++dx) acc += image.at(y * factor + dy, x * factor + dx);
      out[y * w + x] = acc * norm;
    }
  }
  return ImagePlane(h, w, std::move(out));
}

void WritePgm(const std::filesystem::path& path, const ImagePlane& image) {
  std::string header = "P5\n" + std::to_string(image.width()) + " " +
                       std::to_string(image.height()) + "\n255\n";
  std::vector<std::uint8_t> bytes(header.begin(), header.end());
  for (double v : image.values()) {
    bytes.push_back(static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0)));
  }
  WriteFileBytes(path, bytes);
}

ImagePlane ReadPgm(const std::filesystem::path& path) {
  const auto bytes = ReadFileBytes(path);
  std::size_t pos = 0;
  auto next_token = [&]() -> std::string {
    while (pos < bytes.size()) {
      if (bytes[pos] == '#') {
        while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
      } else if (std::isspace(bytes[pos])) {
        ++pos;
      } else {
        break;
      }
    }
    std::string tok;
    while (pos < bytes.size() && !std::isspace(bytes[pos])) tok += static_cast<char>(bytes[pos++]);
    return tok;
  };
  if (next_token() != "P5") throw IoError(path.string() + ": not a binary PGM (P5)");
  std::size_t width = 0;
  std::size_t height = 0;
  int maxval = 0;
  try {
    width = std::stoul(next_token());
    height = std::stoul(next_token());
    maxval = std::stoi(next_token());
  } catch (const std::exception&) {
    throw IoError(path.string() + ": malformed PGM header");
  }
  if (maxval != 255) throw IoError(path.string() + ": only maxval 255 is supported");
  ++pos;  // single whitespace after maxval
  if (bytes.size() < pos + width * height) throw IoError(path.string() + ": truncated PGM data");
  std::vector<double> values(width * height);
  for (std::size_t i = 0; i < values.size(); ++i) values[i] = bytes[pos + i] / 255.0;
  return ImagePlane(height, width, std::move(values));
}

Tensor2D ToTensor(const ImagePlane& image) {
  return Tensor2D(image.height(), image.width(), image.values());
}

ImagePlane FromTensor(const Tensor2D& t) {
  return ImagePlane(t.rows(), t.cols(), std::vector<double>(t.values().begin(), t.values().end()));
}

}  // namespace harmoq
