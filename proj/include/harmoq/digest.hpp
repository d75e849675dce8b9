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
#ifndef HARMOQ_DIGEST_HPP_
#define HARMOQ_DIGEST_HPP_

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>

#include "harmoq/tensor.hpp"

namespace harmoq {

// Incremental SHA-256, hex-encoded on Finish().
class Sha256 {
 public:
  Sha256();
  ~Sha256();
  Sha256(const Sha256&) = delete;
  Sha256& operator=(const Sha256&) = delete;

  void Update(std::span<const std::uint8_t> bytes);
  void Update(const std::string& text);
  void Update(const Tensor2D& t);  // shape, then raw double bits
  std::string Finish();

 private:
  void* ctx_;
};

std::string DigestFile(const std::filesystem::path& path);
std::string DigestTensor(const Tensor2D& t);

}  // namespace harmoq

#endif  // HARMOQ_DIGEST_HPP_
