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
#ifndef HARMOQ_TENSOR_HPP_
#define HARMOQ_TENSOR_HPP_

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace harmoq {

// Dense row-major matrix of doubles. Weights are m x d, activation batches
// are n x d (one sample per row), projections are k x d.
class Tensor2D {
 public:
  Tensor2D() = default;
  Tensor2D(std::size_t rows, std::size_t cols);  // zero-filled
  // Throws DimensionError if data.size() != rows * cols, DataError if any
  // entry is NaN or Inf.
  Tensor2D(std::size_t rows, std::size_t cols, std::vector<double> data);

  static Tensor2D Zeros(std::size_t rows, std::size_t cols);
  static Tensor2D Identity(std::size_t n);
  static Tensor2D FromRows(std::initializer_list<std::initializer_list<double>> rows);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const {
    return {data_.data() + r * cols_, cols_};
  }
  std::span<double> values() { return data_; }
  std::span<const double> values() const { return data_; }

  bool operator==(const Tensor2D& other) const = default;

  std::string ShapeString() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

// Element-wise and shape helpers. All throw DimensionError on mismatch.
Tensor2D Transpose(const Tensor2D& a);
Tensor2D MatMul(const Tensor2D& a, const Tensor2D& b);        // a * b
Tensor2D MatMulTransB(const Tensor2D& a, const Tensor2D& b);  // a * b^T
Tensor2D MatMulTransA(const Tensor2D& a, const Tensor2D& b);  // a^T * b
Tensor2D Add(const Tensor2D& a, const Tensor2D& b);
Tensor2D Subtract(const Tensor2D& a, const Tensor2D& b);
Tensor2D Scale(const Tensor2D& a, double factor);
Tensor2D AddScaledIdentity(const Tensor2D& a, double factor);
Tensor2D Symmetrize(const Tensor2D& a);  // (a + a^T) / 2

double FrobeniusNorm(const Tensor2D& a);
double SquaredFrobeniusNorm(const Tensor2D& a);
double Trace(const Tensor2D& a);
double MaxAbs(const Tensor2D& a);
// sum_ij a_ij * b_ij
double FrobeniusInner(const Tensor2D& a, const Tensor2D& b);

void RequireSameShape(const Tensor2D& a, const Tensor2D& b, const char* context);

}  // namespace harmoq

#endif  // HARMOQ_TENSOR_HPP_
