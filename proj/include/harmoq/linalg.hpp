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
#ifndef HARMOQ_LINALG_HPP_
#define HARMOQ_LINALG_HPP_

#include <cstdint>

#include "harmoq/tensor.hpp"

namespace harmoq {

inline constexpr double kDefaultCholeskyEps = 1e-6;
inline constexpr double kSymmetryTolerance = 1e-10;

// Solves X * (A + eps * I) = B for X (m x k), where A is k x k symmetric
// positive definite. A is checked for symmetry (relative 1e-10) and rejected
// rather than repaired. Throws DimensionError on shape problems and
// SingularityError if the stabilized matrix is not positive definite.
Tensor2D CholeskySolve(const Tensor2D& a, const Tensor2D& b, double eps = kDefaultCholeskyEps);

// Lower-triangular L with L * L^T = a. Throws SingularityError on a
// non-positive pivot.
Tensor2D CholeskyFactor(const Tensor2D& a);

// rows x cols matrix of i.i.d. standard normal draws; a pure function of its
// arguments.
Tensor2D SeededGaussian(std::size_t rows, std::size_t cols, std::uint64_t seed);

}  // namespace harmoq

#endif  // HARMOQ_LINALG_HPP_
