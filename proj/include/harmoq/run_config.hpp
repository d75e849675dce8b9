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
#ifndef HARMOQ_RUN_CONFIG_HPP_
#define HARMOQ_RUN_CONFIG_HPP_

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "harmoq/corpus.hpp"
#include "harmoq/pipeline.hpp"
#include "harmoq/toy_net.hpp"

namespace harmoq {

enum class ValueKind { kReal, kCount, kBool, kText, kCountList };

struct ConfigKey {
  std::string key;
  ValueKind kind;
  std::string default_value;
  std::string doc;
};

// Every accepted key, in the order used when writing resolved configs.
const std::vector<ConfigKey>& ConfigSchema();

// Flat `key = value` configuration. Lines starting with '#' are comments.
class RunConfig {
 public:
  RunConfig();  // all defaults

  static RunConfig FromText(const std::string& text);
  static RunConfig FromFile(const std::filesystem::path& path);

  // Throws ConfigError for unknown keys or values that do not parse.
  void Set(const std::string& key, const std::string& value);
  const std::string& Get(const std::string& key) const;

  double Real(const std::string& key) const;
  std::size_t Count(const std::string& key) const;
  bool Bool(const std::string& key) const;
  std::vector<std::size_t> CountList(const std::string& key) const;
  std::uint64_t seed() const { return Count("run.seed"); }

  // All keys with their resolved values, schema order.
  std::string ToText() const;

  PipelineConfig Pipeline() const;
  ToyNetConfig Net() const;
  BitWidths Bits() const;

  // Builds and validates every module config.
  void Validate() const;

 private:
  std::map<std::string, std::string> values_;
};

enum class Split { kTrain, kCalib, kEval };
std::string SplitName(Split split);
CorpusConfig CorpusFor(const RunConfig& cfg, Split split);

// Everything a run needs in memory: corpora, the fitted network, and the
// calibration layers tapped from it.
struct Scenario {
  std::vector<ImagePlane> train;
  std::vector<ImagePlane> calib;
  std::vector<ImagePlane> eval;
  ToyNet net;
  std::vector<CalibLayer> layers;
};

Scenario BuildScenario(const RunConfig& cfg);

// Low-resolution inputs of a high-resolution corpus.
std::vector<ImagePlane> DegradeAll(const std::vector<ImagePlane>& hr, std::size_t factor);

}  // namespace harmoq

#endif  // HARMOQ_RUN_CONFIG_HPP_
