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
#ifndef HARMOQ_ERRORS_HPP_
#define HARMOQ_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace harmoq {

enum class ErrorKind {
  kDimension,
  kSingular,
  kConfig,
  kData,
  kState,
  kNumeric,
  kIo,
  kUsage,
};

const char* ErrorKindName(ErrorKind kind);

// Base of every exception the library throws. The kind drives CLI exit codes.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

#define HARMOQ_DEFINE_ERROR(Name, Kind)                                 \
  class Name : public Error {                                           \
   public:                                                              \
    explicit Name(const std::string& what) : Error(ErrorKind::Kind, what) {} \
  };

HARMOQ_DEFINE_ERROR(DimensionError, kDimension)
HARMOQ_DEFINE_ERROR(SingularityError, kSingular)
HARMOQ_DEFINE_ERROR(ConfigError, kConfig)
HARMOQ_DEFINE_ERROR(DataError, kData)
HARMOQ_DEFINE_ERROR(StateError, kState)
HARMOQ_DEFINE_ERROR(NumericError, kNumeric)
HARMOQ_DEFINE_ERROR(IoError, kIo)
HARMOQ_DEFINE_ERROR(UsageError, kUsage)

#undef HARMOQ_DEFINE_ERROR

}  // namespace harmoq

#endif  // HARMOQ_ERRORS_HPP_
