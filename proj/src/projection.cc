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
#include "harmoq/projection.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "harmoq/errors.hpp"
#include "harmoq/linalg.hpp"

namespace harmoq {
namespace {

using Stencil = std::vector<std::pair<std::size_t, double>>;  // (column, weight)

std::vector<Stencil> Laplacian1D(std::size_t d) {
  std::vector<Stencil> rows;
  for (std::size_t i = 0; i + 2 < d; ++i) rows.push_back({{i, 1.0}, {i + 1, -2.0}, {i + 2, 1.0}});
  return rows;
}

std::vector<Stencil> Laplacian2D(const SpatialShape& s) {
  std::vector<Stencil> rows;
  for (std::size_t y = 1; y + 1 < s.height; ++y) {
    for (std::size_t x = 1; x + 1 < s.width; ++x) {
      const std::size_t c = y * s.width + x;
      rows.push_back({{c - s.width, 1.0}, {c - 1, 1.0}, {c, -4.0}, {c + 1, 1.0}, {c + s.width, 1.0}});
    }
  }
  return rows;
}

std::vector<Stencil> Sobel2D(const SpatialShape& s) {
  static constexpr double kGx[3][3] = {{-1, 0, 1}, {-2, 0, 2}, {-1, 0, 1}};
  static constexpr double kGy[3][3] = {{-1, -2, -1}, {0, 0, 0}, {1, 2, 1}};
  std::vector<Stencil> rows;
  for (const auto* kernel : {kGx, kGy}) {
    for (std::size_t y = 1; y + 1 < s.height; ++y) {
      for (std::size_t x = 1; x + 1 < s.width; ++x) {
        Stencil st;
        for (int dy = -1; dy <= 1; ++dy) {
          for (int dx = -1; dx <= 1; ++dx) {
            const double w = kernel[dy + 1][dx + 1];
            if (w == 0.0) continue;
            st.emplace_back((y + dy) * s.width + (x + dx), w);
          }
        }
        rows.push_back(std::move(st));
      }
    }
  }
  return rows;
}

void RequireSpatial(const std::optional<SpatialShape>& spatial, std::size_t d, const char* kind) {
  if (!spatial) throw ConfigError(std::string(kind) + " projection needs a spatial shape");
  if (spatial->height * spatial->width != d) {
    throw ConfigError(std::string(kind) + " projection: spatial shape does not cover d");
  }
  if (spatial->height < 3 || spatial->width < 3) {
    throw ConfigError(std::string(kind) + " projection: spatial shape must be at least 3x3");
  }
}

std::vector<Stencil> StencilRows(ProjectionKind kind, std::size_t d,
                                 const std::optional<SpatialShape>& spatial) {
  if (kind == ProjectionKind::kSobel) {
    RequireSpatial(spatial, d, "sobel");
    return Sobel2D(*spatial);
  }
  if (spatial) {
    RequireSpatial(spatial, d, "laplacian");
    return Laplacian2D(*spatial);
  }
  return Laplacian1D(d);
}

// k evenly spaced picks out of `available`, in increasing order.
std::vector<std::size_t> EvenlySpaced(std::size_t available, std::size_t k) {
  std::vector<std::size_t> picks(k);
  for (std::size_t i = 0; i < k; ++i) picks[i] = i * available / k;
  return picks;
}

std::size_t ResolveRank(std::size_t requested, std::size_t available) {
  const std::size_t k = requested == 0 ? std::min(kDefaultProjectionRank, available) : requested;
  if (k > available) {
    throw ConfigError("projection: k = " + std::to_string(k) + " exceeds the " +
                      std::to_string(available) + " achievable rows");
  }
  return k;
}

Tensor2D FromStencils(const std::vector<Stencil>& all, std::size_t d, std::size_t k) {
  Tensor2D h(k, d);
  const auto picks = EvenlySpaced(all.size(), k);
  for (std::size_t r = 0; r < k; ++r) {
    for (const auto& [col, w] : all[picks[r]]) h(r, col) += w;
  }
  return h;
}

Tensor2D DctHighpass(std::size_t d, std::size_t k) {
  Tensor2D h(k, d);
  const double n = static_cast<double>(d);
  for (std::size_t r = 0; r < k; ++r) {
    const std::size_t freq = d - k + r;
    const double norm = std::sqrt((freq == 0 ? 1.0 : 2.0) / n);
    for (std::size_t i = 0; i < d; ++i) {
      h(r, i) = norm * std::cos(std::numbers::pi * (2.0 * i + 1.0) * freq / (2.0 * n));
    }
  }
  return h;
}

void NormalizeRows(Tensor2D& h) {
  for (std::size_t r = 0; r < h.rows(); ++r) {
    auto row = h.row(r);
    double norm = 0.0;
    for (double v : row) norm += v * v;
    norm = std::sqrt(norm);
    if (norm == 0.0) throw NumericError("projection: zero row cannot be normalized");
    for (double& v : row) v /= norm;
  }
}

Tensor2D LearnedBasis(const Tensor2D& features, std::size_t d, std::size_t k) {
  if (features.cols() != d) {
    throw DimensionError("learned_basis: calibration features have width " +
                         std::to_string(features.cols()) + ", expected " + std::to_string(d));
  }
  if (features.rows() == 0) throw DataError("learned_basis: no calibration features");
  const std::size_t f = d - 2;
  // Filtered features F = X L^T with L the 1D second-difference operator.
  Eigen::MatrixXd filtered(features.rows(), f);
  for (std::size_t n = 0; n < features.rows(); ++n) {
    const auto x = features.row(n);
    for (std::size_t i = 0; i < f; ++i) filtered(n, i) = x[i] - 2.0 * x[i + 1] + x[i + 2];
  }
  const Eigen::MatrixXd gram = filtered.transpose() * filtered;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(gram);
  if (solver.info() != Eigen::Success) throw NumericError("learned_basis: eigensolver failed");

  Tensor2D h(k, d);
  for (std::size_t r = 0; r < k; ++r) {
    // Eigenvalues ascend; take the largest first.
    Eigen::VectorXd v = solver.eigenvectors().col(static_cast<Eigen::Index>(f - 1 - r));
    Eigen::Index arg = 0;
    v.cwiseAbs().maxCoeff(&arg);
    if (v(arg) < 0) v = -v;
    // Row of H is v^T L, a combination of second-difference stencils.
    for (std::size_t i = 0; i < f; ++i) {
      h(r, i) += v(static_cast<Eigen::Index>(i));
      h(r, i + 1) -= 2.0 * v(static_cast<Eigen::Index>(i));
      h(r, i + 2) += v(static_cast<Eigen::Index>(i));
    }
  }
  NormalizeRows(h);
  return h;
}

}  // namespace

std::string_view ProjectionKindName(ProjectionKind kind) {
  switch (kind) {
    case ProjectionKind::kLaplacian: return "laplacian";
    case ProjectionKind::kSobel: return "sobel";
    case ProjectionKind::kDctHighpass: return "dct_highpass";
    case ProjectionKind::kLearnedBasis: return "learned_basis";
    case ProjectionKind::kRandom: return "random";
    case ProjectionKind::kIdentity: return "identity";
  }
  return "unknown";
}

ProjectionKind ParseProjectionKind(std::string_view name) {
  for (auto kind : {ProjectionKind::kLaplacian, ProjectionKind::kSobel,
                    ProjectionKind::kDctHighpass, ProjectionKind::kLearnedBasis,
                    ProjectionKind::kRandom, ProjectionKind::kIdentity}) {
    if (ProjectionKindName(kind) == name) return kind;
  }
  throw ConfigError("unknown projection kind '" + std::string(name) + "'");
}

std::size_t AvailableStencilRows(ProjectionKind kind, std::size_t dim,
                                 const std::optional<SpatialShape>& spatial) {
  return StencilRows(kind, dim, spatial).size();
}

ProjectionMatrix MakeProjection(const ProjectionRequest& req) {
  const std::size_t d = req.dim;
  if (d < 3) throw ConfigError("projection: d must be >= 3");

  ProjectionMatrix out;
  out.kind = req.kind;
  out.spatial = req.spatial;
  switch (req.kind) {
    case ProjectionKind::kLaplacian:
    case ProjectionKind::kSobel: {
      const auto rows = StencilRows(req.kind, d, req.spatial);
      out.h = FromStencils(rows, d, ResolveRank(req.rank, rows.size()));
      break;
    }
    case ProjectionKind::kDctHighpass:
      out.h = DctHighpass(d, req.rank == 0 ? ResolveRank(0, d - 2) : ResolveRank(req.rank, d));
      break;
    case ProjectionKind::kLearnedBasis:
      if (req.calib_features == nullptr) {
        throw ConfigError("learned_basis projection needs calibration features");
      }
      out.h = LearnedBasis(*req.calib_features, d, ResolveRank(req.rank, d - 2));
      break;
    case ProjectionKind::kRandom: {
      if (!req.seed) throw ConfigError("random projection needs a seed");
      const std::size_t k = req.rank == 0 ? ResolveRank(0, d - 2) : ResolveRank(req.rank, d);
      out.h = SeededGaussian(k, d, *req.seed);
      NormalizeRows(out.h);
      break;
    }
    case ProjectionKind::kIdentity:
      if (req.rank != 0 && req.rank != d) throw ConfigError("identity projection needs k = d");
      out.h = Tensor2D::Identity(d);
      break;
  }
  return out;
}

}  // namespace harmoq
