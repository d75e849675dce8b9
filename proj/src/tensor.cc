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
#include "harmoq/tensor.hpp"

#include <algorithm>
#include <cmath>

#include "harmoq/errors.hpp"

namespace harmoq {

const char* ErrorKindName(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kDimension: return "dimension error";
    case ErrorKind::kSingular: return "singularity error";
    case ErrorKind::kConfig: return "config error";
    case ErrorKind::kData: return "data error";
    case ErrorKind::kState: return "state error";
    case ErrorKind::kNumeric: return "numeric error";
    case ErrorKind::kIo: return "I/O error";
    case ErrorKind::kUsage: return "usage error";
  }
  return "error";
}

Tensor2D::Tensor2D(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

Tensor2D::Tensor2D(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows * cols) {
    throw DimensionError("tensor data length " + std::to_string(data_.size()) +
                         " does not match shape (" + std::to_string(rows) + ", " +
                         std::to_string(cols) + ")");
  }
  for (double v : data_) {
    if (!std::isfinite(v)) throw DataError("tensor contains a non-finite entry");
  }
}

Tensor2D Tensor2D::Zeros(std::size_t rows, std::size_t cols) { return Tensor2D(rows, cols); }

Tensor2D Tensor2D::Identity(std::size_t n) {
  Tensor2D out(n, n);
  for (std::size_t i = 0; i < n; ++i) out(i, i) = 1.0;
  return out;
}

Tensor2D Tensor2D::FromRows(std::initializer_list<std::initializer_list<double>> rows) {
  const std::size_t r = rows.size();
  const std::size_t c = r == 0 ? 0 : rows.begin()->size();
  std::vector<double> data;
  data.reserve(r * c);
  for (const auto& row : rows) {
    if (row.size() != c) throw DimensionError("ragged row list");
    data.insert(data.end(), row.begin(), row.end());
  }
  return Tensor2D(r, c, std::move(data));
}

std::string Tensor2D::ShapeString() const {
  return "(" + std::to_string(rows_) + ", " + std::to_string(cols_) + ")";
}

void RequireSameShape(const Tensor2D& a, const Tensor2D& b, const char* context) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionError(std::string(context) + ": shape " + a.ShapeString() + " vs " +
                         b.ShapeString());
  }
}

Tensor2D Transpose(const Tensor2D& a) {
  Tensor2D out(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out(j, i) = a(i, j);
  return out;
}

Tensor2D MatMul(const Tensor2D& a, const Tensor2D& b) {
  if (a.cols() != b.rows()) {
    throw DimensionError("matmul: " + a.ShapeString() + " * " + b.ShapeString());
  }
  Tensor2D out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    auto out_row = out.row(i);
    for (std::size_t p = 0; p < a.cols(); ++p) {
      const double av = a(i, p);
      if (av == 0.0) continue;
      const auto b_row = b.row(p);
      for (std::size_t j = 0; j < b.cols(); ++j) out_row[j] += av * b_row[j];
    }
  }
  return out;
}

Tensor2D MatMulTransB(const Tensor2D& a, const Tensor2D& b) {
  if (a.cols() != b.cols()) {
    throw DimensionError("matmul (a * b^T): " + a.ShapeString() + " * " + b.ShapeString() +
                         "^T");
  }
  Tensor2D out(a.rows(), b.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    const auto a_row = a.row(i);
    for (std::size_t j = 0; j < b.rows(); ++j) {
      const auto b_row = b.row(j);
      double acc = 0.0;
      for (std::size_t p = 0; p < a.cols(); ++p) acc += a_row[p] * b_row[p];
      out(i, j) = acc;
    }
  }
  return out;
}

Tensor2D MatMulTransA(const Tensor2D& a, const Tensor2D& b) {
  if (a.rows() != b.rows()) {
    throw DimensionError("matmul (a^T * b): " + a.ShapeString() + "^T * " + b.ShapeString());
  }
  Tensor2D out(a.cols(), b.cols());
  for (std::size_t p = 0; p < a.rows(); ++p) {
    const auto a_row = a.row(p);
    const auto b_row = b.row(p);
    for (std::size_t i = 0; i < a.cols(); ++i) {
      const double av = a_row[i];
      if (av == 0.0) continue;
      auto out_row = out.row(i);
      for (std::size_t j = 0; j < b.cols(); ++j) out_row[j] += av * b_row[j];
    }
  }
  return out;
}

Tensor2D Add(const Tensor2D& a, const Tensor2D& b) {
  RequireSameShape(a, b, "add");
  Tensor2D out = a;
  auto ov = out.values();
  auto bv = b.values();
  for (std::size_t i = 0; i < ov.size(); ++i) ov[i] += bv[i];
  return out;
}

Tensor2D Subtract(const Tensor2D& a, const Tensor2D& b) {
  RequireSameShape(a, b, "subtract");
  Tensor2D out = a;
  auto ov = out.values();
  auto bv = b.values();
  for (std::size_t i = 0; i < ov.size(); ++i) ov[i] -= bv[i];
  return out;
}

Tensor2D Scale(const Tensor2D& a, double factor) {
  Tensor2D out = a;
  for (double& v : out.values()) v *= factor;
  return out;
}

Tensor2D AddScaledIdentity(const Tensor2D& a, double factor) {
  if (a.rows() != a.cols()) throw DimensionError("identity shift needs a square matrix");
  Tensor2D out = a;
  for (std::size_t i = 0; i < a.rows(); ++i) out(i, i) += factor;
  return out;
}

Tensor2D Symmetrize(const Tensor2D& a) {
  if (a.rows() != a.cols()) throw DimensionError("symmetrize needs a square matrix");
  Tensor2D out(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = 0.5 * (a(i, j) + a(j, i));
  return out;
}

double SquaredFrobeniusNorm(const Tensor2D& a) {
  double acc = 0.0;
  for (double v : a.values()) acc += v * v;
  return acc;
}

double FrobeniusNorm(const Tensor2D& a) { return std::sqrt(SquaredFrobeniusNorm(a)); }

double Trace(const Tensor2D& a) {
  if (a.rows() != a.cols()) throw DimensionError("trace needs a square matrix");
  double acc = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i) acc += a(i, i);
  return acc;
}

double MaxAbs(const Tensor2D& a) {
  double m = 0.0;
  for (double v : a.values()) m = std::max(m, std::abs(v));
  return m;
}

double FrobeniusInner(const Tensor2D& a, const Tensor2D& b) {
  RequireSameShape(a, b, "inner product");
  double acc = 0.0;
  auto av = a.values();
  auto bv = b.values();
  for (std::size_t i = 0; i < av.size(); ++i) acc += av[i] * bv[i];
  return acc;
}

}  // namespace harmoq
