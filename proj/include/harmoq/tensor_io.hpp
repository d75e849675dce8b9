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
#ifndef HARMOQ_TENSOR_IO_HPP_
#define HARMOQ_TENSOR_IO_HPP_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "harmoq/tensor.hpp"

namespace harmoq {

// HQT1 layout, all little-endian:
//   "HQT1" | u32 rank (=2) | u32 rows | u32 cols | rows*cols float32, row-major
// Values are narrowed to float32 on write; reading a written file and writing
// it again reproduces the same bytes.
std::vector<std::uint8_t> EncodeHqt1(const Tensor2D& t);
Tensor2D DecodeHqt1(const std::vector<std::uint8_t>& bytes);

void WriteHqt1(const std::filesystem::path& path, const Tensor2D& t);
Tensor2D ReadHqt1(const std::filesystem::path& path);

// Whole-file helpers shared by the CLI. Throw IoError.
std::vector<std::uint8_t> ReadFileBytes(const std::filesystem::path& path);
void WriteFileBytes(const std::filesystem::path& path, const std::vector<std::uint8_t>& bytes);
void WriteTextFile(const std::filesystem::path& path, const std::string& text);
std::string ReadTextFile(const std::filesystem::path& path);

}  // namespace harmoq

#endif  // HARMOQ_TENSOR_IO_HPP_
