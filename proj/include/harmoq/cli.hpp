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
#ifndef HARMOQ_CLI_HPP_
#define HARMOQ_CLI_HPP_

#include <ostream>
#include <string>
#include <vector>

#include "harmoq/errors.hpp"

namespace harmoq {

inline constexpr const char* kVersion = "0.1.0";

// 2 usage/config, 3 I/O or input data, 4 numeric failure, 1 anything else.
int ExitCodeFor(ErrorKind kind);

// Runs one command line (arguments after the program name). Diagnostics go to
// `err` as a single line.
int Execute(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace harmoq

#endif  // HARMOQ_CLI_HPP_
