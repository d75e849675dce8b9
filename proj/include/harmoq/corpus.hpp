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
#ifndef HARMOQ_CORPUS_HPP_
#define HARMOQ_CORPUS_HPP_

#include <cstdint>
#include <vector>

#include "harmoq/image.hpp"

namespace harmoq {

struct CorpusConfig {
  std::size_t count = 32;
  std::size_t height = 16;
  std::size_t width = 16;
  double edge_density = 0.5;  // fraction of patches built from step edges
  double noise = 0.01;        // std-dev of additive Gaussian noise
  std::uint64_t seed = 42;

  void Validate() const;
};

// Seeded synthetic high-resolution patches. Each patch is one of: step edges
// (probability edge_density), a sinusoidal texture, or a flat region with a
// gentle gradient (the remaining probability split evenly). Pixels are
// rounded to multiples of 1/255.
std::vector<ImagePlane> GenerateCorpus(const CorpusConfig& cfg);

// Fraction of pixels whose horizontal or vertical neighbour differs by more
// than `threshold`.
double EdgeFraction(const ImagePlane& image, double threshold = 0.1);

}  // namespace harmoq

#endif  // HARMOQ_CORPUS_HPP_
