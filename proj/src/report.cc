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
#include "harmoq/report.hpp"

#include <algorithm>
#include <sstream>

#include "harmoq/errors.hpp"

namespace harmoq {
namespace {

using Json = nlohmann::ordered_json;

std::string CsvCell(const Json& v) {
  std::string text;
  if (v.is_string()) {
    text = v.get<std::string>();
  } else if (v.is_array()) {
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (i) text += ';';
      text += v[i].dump();
    }
  } else if (v.is_null()) {
    text = "";
  } else {
    text = v.dump();
  }
  if (text.find_first_of(",\"\n") == std::string::npos) return text;
  std::string quoted = "\"";
  for (char c : text) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  return quoted + "\"";
}

std::vector<std::string> SplitCsvLine(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (quoted) throw DataError("csv: unterminated quoted field");
  out.push_back(cur);
  return out;
}

Json CsvValue(const std::string& field) {
  if (field.empty()) return Json(field);
  if (field == "true") return Json(true);
  if (field == "false") return Json(false);
  try {
    std::size_t used = 0;
    const double v = std::stod(field, &used);
    if (used == field.size()) {
      const bool integral = field.find_first_of(".eE") == std::string::npos;
      if (integral && field.front() != '-') return Json(std::stoull(field));
      if (integral) return Json(std::stoll(field));
      return Json(v);
    }
  } catch (const std::exception&) {
  }
  return Json(field);
}

}  // namespace

void Table::AddRow(std::vector<Json> row) {
  if (row.size() != columns.size()) throw DimensionError("table: row width does not match header");
  rows.push_back(std::move(row));
}

std::string ToCsv(const Table& table) {
  std::string out;
  for (std::size_t c = 0; c < table.columns.size(); ++c) {
    if (c) out += ',';
    out += CsvCell(Json(table.columns[c]));
  }
  out += '\n';
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out += ',';
      out += CsvCell(row[c]);
    }
    out += '\n';
  }
  return out;
}

std::string ToJsonLines(const Table& table) {
  std::string out;
  for (const auto& row : table.rows) {
    Json obj = Json::object();
    for (std::size_t c = 0; c < row.size(); ++c) obj[table.columns[c]] = row[c];
    out += obj.dump() + "\n";
  }
  return out;
}

Table ParseJsonLines(const std::string& text) {
  std::vector<Json> objects;
  std::stringstream ss(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(ss, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    Json obj;
    try {
      obj = Json::parse(line);
    } catch (const nlohmann::json::exception&) {
      throw DataError("jsonl line " + std::to_string(line_no) + ": not valid JSON");
    }
    if (!obj.is_object()) throw DataError("jsonl line " + std::to_string(line_no) + ": not an object");
    objects.push_back(std::move(obj));
  }
  Table table;
  for (const auto& obj : objects) {
    for (const auto& item : obj.items()) {
      if (std::find(table.columns.begin(), table.columns.end(), item.key()) == table.columns.end()) {
        table.columns.push_back(item.key());
      }
    }
  }
  for (const auto& obj : objects) {
    std::vector<Json> row;
    for (const auto& col : table.columns) row.push_back(obj.contains(col) ? obj.at(col) : Json());
    table.rows.push_back(std::move(row));
  }
  return table;
}

Table ParseCsv(const std::string& text) {
  std::stringstream ss(text);
  std::string line;
  Table table;
  bool header = true;
  while (std::getline(ss, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = SplitCsvLine(line);
    if (header) {
      table.columns = fields;
      header = false;
      continue;
    }
    if (fields.size() != table.columns.size()) throw DataError("csv: ragged row");
    std::vector<Json> row;
    for (const auto& f : fields) row.push_back(CsvValue(f));
    table.rows.push_back(std::move(row));
  }
  if (header) throw DataError("csv: missing header");
  return table;
}

std::string RenderTable(const Table& table, const std::string& format) {
  if (format == "csv") return ToCsv(table);
  if (format == "jsonl") return ToJsonLines(table);
  throw ConfigError("unknown report format '" + format + "' (expected csv or jsonl)");
}

}  // namespace harmoq
