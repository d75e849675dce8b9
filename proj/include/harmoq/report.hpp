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
#ifndef HARMOQ_REPORT_HPP_
#define HARMOQ_REPORT_HPP_

#include <string>
#include <vector>

#include "json.hpp"

namespace harmoq {

// Plot-ready tabular data. Cells are JSON scalars (numbers, strings, bools)
// or arrays of numbers.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<nlohmann::ordered_json>> rows;

  void AddRow(std::vector<nlohmann::ordered_json> row);
};

// Numbers print in shortest round-trip form; arrays are ';'-joined; fields
// containing ',', '"' or newlines are quoted.
std::string ToCsv(const Table& table);
std::string ToJsonLines(const Table& table);

// Columns are the keys in order of first appearance.
Table ParseJsonLines(const std::string& text);
// Fields that parse completely as numbers become numbers.
Table ParseCsv(const std::string& text);

// "csv" or "jsonl".
std::string RenderTable(const Table& table, const std::string& format);

}  // namespace harmoq

#endif  // HARMOQ_REPORT_HPP_
