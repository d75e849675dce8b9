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
#include "harmoq/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "harmoq/errors.hpp"

namespace harmoq {
namespace {

using Rng = std::mt19937_64;

double Uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

// One or two straight edges at random orientations, each splitting the patch
// into two constant levels.
std::vector<double> StepEdges(Rng& rng, std::size_t h, std::size_t w) {
  std::vector<double> v(h * w, Uniform(rng, 0.1, 0.9));
  const int edges = Uniform(rng, 0.0, 1.0) < 0.5 ? 1 : 2;
  for (int e = 0; e < edges; ++e) {
    const double angle = Uniform(rng, 0.0, std::numbers::pi);
    const double nx = std::cos(angle);
    const double ny = std::sin(angle);
    const double cx = Uniform(rng, 0.25, 0.75) * static_cast<double>(w);
    const double cy = Uniform(rng, 0.25, 0.75) * static_cast<double>(h);
    const double level = Uniform(rng, 0.05, 0.95);
    for (std::size_t y = 0; y < h; ++y) {
      for (std::size_t x = 0; x < w; ++x) {
        const double side = (static_cast<double>(x) + 0.5 - cx) * nx +
                            (static_cast<double>(y) + 0.5 - cy) * ny;
        if (side > 0.0) v[y * w + x] = level;
      }
    }
  }
  return v;
}

std::vector<double> Sinusoid(Rng& rng, std::size_t h, std::size_t w) {
  const double period = Uniform(rng, 3.0, 8.0);
  const double angle = Uniform(rng, 0.0, std::numbers::pi);
  const double phase = Uniform(rng, 0.0, 2.0 * std::numbers::pi);
  const double mean = Uniform(rng, 0.35, 0.65);
  const double amp = Uniform(rng, 0.15, 0.3);
  const double kx = 2.0 * std::numbers::pi * std::cos(angle) / period;
  const double ky = 2.0 * std::numbers::pi * std::sin(angle) / period;
  std::vector<double> v(h * w);
  for (std::size_t y = 0; y < h; ++y)
    for (std::size_t x = 0; x < w; ++x)
      v[y * w + x] = mean + amp * std::sin(kx * static_cast<double>(x) +
                                           ky * static_cast<double>(y) + phase);
  return v;
}

std::vector<double> Flat(Rng& rng, std::size_t h, std::size_t w) {
  const double base = Uniform(rng, 0.1, 0.9);
  const double gx = Uniform(rng, -0.01, 0.01);
  const double gy = Uniform(rng, -0.01, 0.01);
  std::vector<double> v(h * w);
  for (std::size_t y = 0; y < h; ++y)
    for (std::size_t x = 0; x < w; ++x)
      v[y * w + x] = base + gx * static_cast<double>(x) + gy * static_cast<double>(y);
  return v;
}

}  // namespace

void CorpusConfig::Validate() const {
  if (count == 0) throw ConfigError("corpus: count must be >= 1");
  if (height == 0 || width == 0) throw ConfigError("corpus: patch size must be positive");
  if (!(edge_density >= 0.0 && edge_density <= 1.0)) {
    throw ConfigError("corpus: edge_density must lie in [0, 1]");
  }
  if (!(noise >= 0.0)) throw ConfigError("corpus: noise must be >= 0");
}

std::vector<ImagePlane> GenerateCorpus(const CorpusConfig& cfg) {
  cfg.Validate();
  Rng rng(cfg.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<ImagePlane> out;
  out.reserve(cfg.count);
  for (std::size_t i = 0; i < cfg.count; ++i) {
    const double pick = Uniform(rng, 0.0, 1.0);
    std::vector<double> v;
    if (pick < cfg.edge_density) {
      v = StepEdges(rng, cfg.height, cfg.width);
    } else if (pick < cfg.edge_density + 0.5 * (1.0 - cfg.edge_density)) {
      v = Sinusoid(rng, cfg.height, cfg.width);
    } else {
      v = Flat(rng, cfg.height, cfg.width);
    }
    if (cfg.noise > 0.0) {
      for (double& p : v) p += cfg.noise * gauss(rng);
    }
    // Stored at 8-bit precision so PGM round trips are exact.
    for (double& p : v) p = static_cast<double>(std::lround(std::clamp(p, 0.0, 1.0) * 255.0)) / 255.0;
    out.emplace_back(cfg.height, cfg.width, std::move(v));
  }
  return out;
}

double EdgeFraction(const ImagePlane& image, double threshold) {
  const std::size_t h = image.height();
  const std::size_t w = image.width();
  if (h == 0 || w == 0) return 0.0;
  std::size_t hits = 0;
  for (std::size_t y = 0; y < h; ++y) {
    for (std::size_t x = 0; x < w; ++x) {
      const bool right = x + 1 < w && std::abs(image.at(y, x + 1) - image.at(y, x)) > threshold;
      const bool down = y + 1 < h && std::abs(image.at(y + 1, x) - image.at(y, x)) > threshold;
      if (right || down) ++hits;
    }
  }
  return static_cast<double>(hits) / static_cast<double>(h * w);
}

}  // namespace harmoq
