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
#ifndef HARMOQ_PROJECTION_HPP_
#define HARMOQ_PROJECTION_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "harmoq/tensor.hpp"

namespace harmoq {

enum class ProjectionKind { kLaplacian, kSobel, kDctHighpass, kLearnedBasis, kRandom, kIdentity };

// Config spellings: laplacian|sobel|dct_highpass|learned_basis|random|identity
std::string_view ProjectionKindName(ProjectionKind kind);
ProjectionKind ParseProjectionKind(std::string_view name);  // throws ConfigError

struct SpatialShape {
  std::size_t height = 0;
  std::size_t width = 0;
};

struct ProjectionRequest {
  ProjectionKind kind = ProjectionKind::kLaplacian;
  std::size_t dim = 0;                    // d
  std::size_t rank = 0;                   // k; 0 selects the default
  std::optional<SpatialShape> spatial;    // required for sobel
  std::optional<std::uint64_t> seed;      // required for random
  const Tensor2D* calib_features = nullptr;  // n x d, required for learned_basis
};

// Structural projection H (k x d) over a layer's d-dimensional input.
struct ProjectionMatrix {
  ProjectionKind kind = ProjectionKind::kIdentity;
  Tensor2D h;
  std::optional<SpatialShape> spatial;

  std::size_t rank() const { return h.rows(); }
  std::size_t dim() const { return h.cols(); }
};

inline constexpr std::size_t kDefaultProjectionRank = 64;

// Rows produced by each kind:
//   laplacian     1D stencil [1 -2 1] at every interior position, or with a
//                 spatial shape the 3x3 [[0 1 0][1 -4 1][0 1 0]] kernel at
//                 every interior pixel
//   sobel         horizontal then vertical 3x3 Sobel stencils at interior pixels
//   dct_highpass  the k highest-frequency orthonormal DCT-II basis vectors
//   learned_basis top-k principal directions of the 1D-Laplacian-filtered
//                 calibration features, mapped back through the stencil
//   random        seeded Gaussian rows normalized to unit length
//   identity      I_d
// When k is below the number of available stencil rows, rows are taken at
// evenly spaced positions. The default k is min(64, available) for stencil
// kinds and min(64, d - 2) otherwise.
ProjectionMatrix MakeProjection(const ProjectionRequest& request);

// Number of rows the stencil kinds can produce for this request.
std::size_t AvailableStencilRows(ProjectionKind kind, std::size_t dim,
                                 const std::optional<SpatialShape>& spatial);

}  // namespace harmoq

#endif  // HARMOQ_PROJECTION_HPP_
