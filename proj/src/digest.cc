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
#include "harmoq/digest.hpp"

#include <openssl/evp.h>

#include <bit>
#include <cstdio>

#include "harmoq/errors.hpp"
#include "harmoq/tensor_io.hpp"

namespace harmoq {

Sha256::Sha256() : ctx_(EVP_MD_CTX_new()) {
  if (ctx_ == nullptr ||
      EVP_DigestInit_ex(static_cast<EVP_MD_CTX*>(ctx_), EVP_sha256(), nullptr) != 1) {
    throw StateError("sha256: initialization failed");
  }
}

Sha256::~Sha256() { EVP_MD_CTX_free(static_cast<EVP_MD_CTX*>(ctx_)); }

void Sha256::Update(std::span<const std::uint8_t> bytes) {
  EVP_DigestUpdate(static_cast<EVP_MD_CTX*>(ctx_), bytes.data(), bytes.size());
}

void Sha256::Update(const std::string& text) {
  EVP_DigestUpdate(static_cast<EVP_MD_CTX*>(ctx_), text.data(), text.size());
}

void Sha256::Update(const Tensor2D& t) {
  const std::uint64_t dims[2] = {t.rows(), t.cols()};
  EVP_DigestUpdate(static_cast<EVP_MD_CTX*>(ctx_), dims, sizeof(dims));
  for (double v : t.values()) {
    const std::uint64_t bits = std::bit_cast<std::uint64_t>(v);
    EVP_DigestUpdate(static_cast<EVP_MD_CTX*>(ctx_), &bits, sizeof(bits));
  }
}

std::string Sha256::Finish() {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(static_cast<EVP_MD_CTX*>(ctx_), md, &len);
  std::string hex;
  hex.reserve(2 * len);
  char buf[3];
  for (unsigned int i = 0; i < len; ++i) {
    std::snprintf(buf, sizeof(buf), "%02x", md[i]);
    hex += buf;
  }
  return hex;
}

std::string DigestFile(const std::filesystem::path& path) {
  Sha256 h;
  h.Update(ReadFileBytes(path));
  return h.Finish();
}

std::string DigestTensor(const Tensor2D& t) {
  Sha256 h;
  h.Update(t);
  return h.Finish();
}

}  // namespace harmoq
