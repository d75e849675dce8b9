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
#include "harmoq/tensor_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <limits>

#include "harmoq/errors.hpp"

namespace harmoq {
namespace {

constexpr char kMagic[4] = {'H', 'Q', 'T', '1'};
constexpr std::size_t kHeaderBytes = 16;

void PutU32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::uint32_t GetU32(const std::uint8_t* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

}  // namespace

std::vector<std::uint8_t> EncodeHqt1(const Tensor2D& t) {
  if (t.rows() > std::numeric_limits<std::uint32_t>::max() ||
      t.cols() > std::numeric_limits<std::uint32_t>::max()) {
    throw DimensionError("HQT1: dimensions exceed 32 bits");
  }
  std::vector<std::uint8_t> out;
  out.reserve(kHeaderBytes + 4 * t.size());
  out.insert(out.end(), std::begin(kMagic), std::end(kMagic));
  PutU32(out, 2);
  PutU32(out, static_cast<std::uint32_t>(t.rows()));
  PutU32(out, static_cast<std::uint32_t>(t.cols()));
  for (double v : t.values()) {
    const float f = static_cast<float>(v);
    PutU32(out, std::bit_cast<std::uint32_t>(f));
  }
  return out;
}

Tensor2D DecodeHqt1(const std::vector<std::uint8_t>& bytes) {
  if (bytes.size() < kHeaderBytes || std::memcmp(bytes.data(), kMagic, 4) != 0) {
    throw IoError("HQT1: bad magic or truncated header");
  }
  const std::uint32_t rank = GetU32(bytes.data() + 4);
  if (rank != 2) throw IoError("HQT1: unsupported rank " + std::to_string(rank));
  const std::uint64_t rows = GetU32(bytes.data() + 8);
  const std::uint64_t cols = GetU32(bytes.data() + 12);
  if (bytes.size() != kHeaderBytes + 4 * rows * cols) {
    throw IoError("HQT1: payload length does not match header dims");
  }
  std::vector<double> data(rows * cols);
  const std::uint8_t* p = bytes.data() + kHeaderBytes;
  for (std::size_t i = 0; i < data.size(); ++i, p += 4) {
    data[i] = static_cast<double>(std::bit_cast<float>(GetU32(p)));
  }
  return Tensor2D(rows, cols, std::move(data));
}

std::vector<std::uint8_t> ReadFileBytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return std::vector<std::uint8_t>(std::istreambuf_iterator<char>(in),
                                   std::istreambuf_iterator<char>());
}

void WriteFileBytes(const std::filesystem::path& path, const std::vector<std::uint8_t>& bytes) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("short write to " + path.string());
}

void WriteTextFile(const std::filesystem::path& path, const std::string& text) {
  WriteFileBytes(path, std::vector<std::uint8_t>(text.begin(), text.end()));
}

std::string ReadTextFile(const std::filesystem::path& path) {
  const auto bytes = ReadFileBytes(path);
  return std::string(bytes.begin(), bytes.end());
}

void WriteHqt1(const std::filesystem::path& path, const Tensor2D& t) {
  WriteFileBytes(path, EncodeHqt1(t));
}

Tensor2D ReadHqt1(const std::filesystem::path& path) { return DecodeHqt1(ReadFileBytes(path)); }

}  // namespace harmoq
