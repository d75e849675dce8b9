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
#include "harmoq/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>

#include "CLI11.hpp"
#include "harmoq/corpus.hpp"
#include "harmoq/digest.hpp"
#include "harmoq/metrics.hpp"
#include "harmoq/pipeline.hpp"
#include "harmoq/report.hpp"
#include "harmoq/run_config.hpp"
#include "harmoq/sensitivity.hpp"
#include "harmoq/tensor_io.hpp"
#include "harmoq/toy_net.hpp"
#include "json.hpp"

namespace harmoq {
namespace {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;
using Overrides = std::vector<std::pair<std::string, std::string>>;

const std::vector<std::string> kSubcommands = {"gen-corpus", "calibrate", "quantize", "eval",
                                               "ablate",     "sensitivity", "report"};

struct Context {
  RunConfig cfg;
  std::string subcommand;
  fs::path out;
  fs::path corpus;
  fs::path model;
  fs::path quant;
  std::string format;
  std::map<std::string, std::string> inputs;   // path -> sha256
  std::map<std::string, std::string> outputs;  // path -> sha256
  std::ostream* log = nullptr;

  // Flags that only some subcommands read.
  std::string report_input;
  bool projection_grid = false;
};

std::string Ext(const Context& ctx) { return ctx.format == "csv" ? ".csv" : ".jsonl"; }

void RecordInput(Context& ctx, const fs::path& path) {
  ctx.inputs[path.generic_string()] = DigestFile(path);
}

void WriteOutput(Context& ctx, const fs::path& path, const std::string& text) {
  WriteTextFile(path, text);
  ctx.outputs[path.generic_string()] = DigestFile(path);
  *ctx.log << "wrote " << path.generic_string() << "\n";
}

void WriteTableOutput(Context& ctx, const std::string& stem, const Table& table) {
  WriteOutput(ctx, ctx.out / (stem + Ext(ctx)), RenderTable(table, ctx.format));
}

fs::path SplitDir(const Context& ctx, Split split) { return ctx.corpus / SplitName(split); }

std::vector<ImagePlane> ReadCorpus(Context& ctx, Split split) {
  const fs::path dir = SplitDir(ctx, split);
  if (!fs::is_directory(dir)) throw IoError("corpus split not found: " + dir.generic_string());
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.path().extension() == ".pgm") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) throw DataError("corpus split is empty: " + dir.generic_string());
  std::vector<ImagePlane> images;
  for (const auto& f : files) {
    images.push_back(ReadPgm(f));
    RecordInput(ctx, f);
  }
  return images;
}

ToyNet LoadModel(Context& ctx) {
  const ToyNetConfig net_cfg = ctx.cfg.Net();
  ToyNet net = ToyNet::Load(ctx.model, net_cfg);
  for (std::size_t i = 0; i < net_cfg.num_layers(); ++i) {
    RecordInput(ctx, ctx.model / ("layer" + std::to_string(i) + "_weight.hqt"));
    RecordInput(ctx, ctx.model / ("layer" + std::to_string(i) + "_bias.hqt"));
  }
  return net;
}

std::vector<CalibLayer> CalibrationLayers(Context& ctx, const ToyNet& net) {
  const auto calib = ReadCorpus(ctx, Split::kCalib);
  return net.CalibrationLayers(DegradeAll(calib, net.config().upscale));
}

Json StatesToJson(const std::vector<CalibLayer>& layers, const std::vector<LayerQuantState>& states) {
  Json arr = Json::array();
  for (std::size_t i = 0; i < states.size(); ++i) {
    const auto& st = states[i];
    Json correction = Json::array();
    for (std::size_t r = 0; r < st.correction.rows(); ++r) {
      const auto row = st.correction.row(r);
      correction.push_back(std::vector<double>(row.begin(), row.end()));
    }
    arr.push_back(Json{{"name", layers[i].name},
                       {"alpha_x", st.theta.alpha_x},
                       {"beta_x", st.theta.beta_x},
                       {"alpha_w", st.theta.alpha_w},
                       {"beta_w", st.theta.beta_w},
                       {"scale", st.scale},
                       {"scale_clamped", st.scale_clamped},
                       {"correction", correction}});
  }
  return arr;
}

std::vector<LayerQuantState> StatesFromJson(const Json& arr, const ToyNet& net) {
  if (!arr.is_array() || arr.size() != net.layers().size()) {
    throw DataError("quantized state: expected one entry per network layer");
  }
  std::vector<LayerQuantState> states;
  try {
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const Json& j = arr[i];
      LayerQuantState st;
      st.theta = BoundarySet{j.at("alpha_x").get<double>(), j.at("beta_x").get<double>(),
                             j.at("alpha_w").get<double>(), j.at("beta_w").get<double>()};
      st.theta.Validate();
      st.scale = j.at("scale").get<double>();
      st.scale_clamped = j.at("scale_clamped").get<bool>();
      const auto& w = net.layers()[i].weight;
      std::vector<double> data;
      for (const auto& row : j.at("correction")) {
        for (const auto& v : row) data.push_back(v.get<double>());
      }
      st.correction = Tensor2D(w.rows(), w.cols(), std::move(data));
      states.push_back(std::move(st));
    }
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("quantized state: ") + e.what());
  }
  return states;
}

// --- subcommands ----------------------------------------------------------

void GenCorpus(Context& ctx) {
  Table summary{{"split", "count", "seed", "mean_edge_fraction"}, {}};
  for (Split split : {Split::kTrain, Split::kCalib, Split::kEval}) {
    const CorpusConfig cc = CorpusFor(ctx.cfg, split);
    const auto images = GenerateCorpus(cc);
    double edges = 0.0;
    for (std::size_t i = 0; i < images.size(); ++i) {
      char name[32];
      std::snprintf(name, sizeof(name), "%04zu.pgm", i);
      const fs::path path = SplitDir(ctx, split) / name;
      WritePgm(path, images[i]);
      ctx.outputs[path.generic_string()] = DigestFile(path);
      edges += EdgeFraction(images[i]);
    }
    *ctx.log << "wrote " << images.size() << " patches to " << SplitDir(ctx, split).generic_string()
             << "\n";
    summary.AddRow({SplitName(split), images.size(), cc.seed,
                    edges / static_cast<double>(images.size())});
  }
  WriteTableOutput(ctx, "corpus", summary);
}

void Calibrate(Context& ctx) {
  const auto train = ReadCorpus(ctx, Split::kTrain);
  const ToyNet net = ToyNet::Fit(ctx.cfg.Net(), train);
  net.Save(ctx.model);
  for (const auto& entry : fs::directory_iterator(ctx.model)) {
    ctx.outputs[entry.path().generic_string()] = DigestFile(entry.path());
  }
  *ctx.log << "wrote model to " << ctx.model.generic_string() << "\n";

  const auto layers = CalibrationLayers(ctx, net);
  const PipelineConfig pc = ctx.cfg.Pipeline();
  const auto minmax = MinMaxStates(layers, pc.symmetric);
  const auto pct = PercentileStates(layers, ctx.cfg.Real("quant.percentile"), pc.symmetric);
  Table table{{"layer", "samples", "in_dim", "out_dim", "minmax_alpha_x", "minmax_beta_x",
               "minmax_alpha_w", "minmax_beta_w", "pct_alpha_x", "pct_beta_x", "pct_alpha_w",
               "pct_beta_w", "trace_xx", "norm_dx", "optimal_scale", "minmax_loss"},
              {}};
  for (std::size_t i = 0; i < layers.size(); ++i) {
    const SecondMoments m = LayerStatistics(layers[i], minmax[i], pc);
    const BoundarySet& a = minmax[i].theta;
    const BoundarySet& p = pct[i].theta;
    table.AddRow({layers[i].name, layers[i].inputs.rows(), layers[i].weight.cols(),
                  layers[i].weight.rows(), a.alpha_x, a.beta_x, a.alpha_w, a.beta_w, p.alpha_x,
                  p.beta_x, p.alpha_w, p.beta_w, Trace(m.xx), FrobeniusNorm(m.dx),
                  OptimalScale(a, pc.bits).s,
                  ModelLoss({layers[i]}, {minmax[i]}, pc.bits)});
  }
  WriteTableOutput(ctx, "calibration", table);
}

void Quantize(Context& ctx) {
  const ToyNet net = LoadModel(ctx);
  const auto layers = CalibrationLayers(ctx, net);
  const PipelineConfig pc = ctx.cfg.Pipeline();
  const PipelineResult r = RunHarmoq(layers, pc);
  const Json state{{"bits_w", pc.bits.weight},
                   {"bits_a", pc.bits.activation},
                   {"components", pc.enabled.Label()},
                   {"initial_loss", r.initial_loss},
                   {"final_loss", r.final_loss},
                   {"converged", r.converged},
                   {"stop_reason", r.trace.stop_reason},
                   {"layers", StatesToJson(layers, r.states)}};
  WriteOutput(ctx, ctx.quant / "state.json", state.dump(2) + "\n");
  WriteOutput(ctx, ctx.quant / "trace.jsonl", r.trace.ToJsonLines());
  Table table{{"components", "initial_loss", "final_loss", "iterations", "converged",
               "stop_reason", "calibration_digest"},
              {}};
  table.AddRow({pc.enabled.Label(), r.initial_loss, r.final_loss, r.trace.records.size(),
                r.converged, r.trace.stop_reason, CalibrationDigest(layers)});
  WriteTableOutput(ctx, "quantize", table);
}

void Eval(Context& ctx) {
  const ToyNet net = LoadModel(ctx);
  const auto layers = CalibrationLayers(ctx, net);
  const auto eval = ReadCorpus(ctx, Split::kEval);
  const PipelineConfig pc = ctx.cfg.Pipeline();
  Table table{{"method", "bits_w", "bits_a", "fixed_batch_loss", "psnr", "ssim"}, {}};
  const CorpusScore fp = EvaluateCorpus(net, eval);
  table.AddRow({"fp", 32, 32, 0.0, fp.psnr, fp.ssim});
  auto add = [&](const std::string& method, const std::vector<LayerQuantState>& states) {
    const auto quant = ToLayerQuantization(states, pc.bits);
    const CorpusScore s = EvaluateCorpus(net, eval, &quant);
    table.AddRow({method, pc.bits.weight, pc.bits.activation, ModelLoss(layers, states, pc.bits),
                  s.psnr, s.ssim});
  };
  add("minmax", MinMaxStates(layers, pc.symmetric));
  add("percentile", PercentileStates(layers, ctx.cfg.Real("quant.percentile"), pc.symmetric));
  const fs::path state_path = ctx.quant / "state.json";
  if (fs::exists(state_path)) {
    RecordInput(ctx, state_path);
    Json state;
    try {
      state = Json::parse(ReadTextFile(state_path));
    } catch (const nlohmann::json::exception&) {
      throw DataError(state_path.generic_string() + ": not valid JSON");
    }
    if (state.value("bits_w", 0) != pc.bits.weight || state.value("bits_a", 0) != pc.bits.activation) {
      throw ConfigError(state_path.generic_string() + " was produced with different bit-widths");
    }
    add("harmoq", StatesFromJson(state.at("layers"), net));
  } else {
    *ctx.log << "no quantized state at " << state_path.generic_string()
             << "; reporting baselines only\n";
  }
  WriteTableOutput(ctx, "eval", table);
}

void Ablate(Context& ctx) {
  const ToyNet net = LoadModel(ctx);
  const auto layers = CalibrationLayers(ctx, net);
  const auto eval = ReadCorpus(ctx, Split::kEval);
  const PipelineConfig pc = ctx.cfg.Pipeline();
  const StateEvaluator evaluator = [&](const std::vector<LayerQuantState>& states) {
    const auto quant = ToLayerQuantization(states, pc.bits);
    const CorpusScore s = EvaluateCorpus(net, eval, &quant);
    return std::make_pair(s.psnr, s.ssim);
  };
  Table table{{"subset", "src", "hso", "abr", "final_loss", "psnr", "ssim", "iterations",
               "input_digest"},
              {}};
  for (const auto& row : AblationRun(layers, pc, AllComponentSubsets(), evaluator)) {
    table.AddRow({row.subset.Label(), row.subset.src, row.subset.hso, row.subset.abr,
                  row.final_loss, row.psnr, row.ssim, row.iterations, row.input_digest});
  }
  WriteTableOutput(ctx, "ablation", table);
  if (!ctx.projection_grid) return;
  Table grid{{"projection", "final_loss", "psnr", "ssim", "iterations", "stop_reason"}, {}};
  for (ProjectionKind kind : {ProjectionKind::kLaplacian, ProjectionKind::kSobel,
                              ProjectionKind::kDctHighpass, ProjectionKind::kLearnedBasis,
                              ProjectionKind::kRandom, ProjectionKind::kIdentity}) {
    PipelineConfig kc = pc;
    kc.projection = kind;
    const PipelineResult r = RunHarmoq(layers, kc);
    const auto [psnr, ssim] = evaluator(r.states);
    grid.AddRow({std::string(ProjectionKindName(kind)), r.final_loss, psnr, ssim,
                 r.trace.records.size(), r.trace.stop_reason});
  }
  WriteTableOutput(ctx, "projection_ablation", grid);
}

void Sensitivity(Context& ctx) {
  const ToyNet net = LoadModel(ctx);
  const auto layers = CalibrationLayers(ctx, net);
  const auto eval = ReadCorpus(ctx, Split::kEval);
  const int wb = static_cast<int>(ctx.cfg.Count("sensitivity.weight_bits"));
  const int ab = static_cast<int>(ctx.cfg.Count("sensitivity.activation_bits"));
  const SensitivityReport report =
      SensitivityAnalysis(net, eval, layers, BitWidths{32, wb}, BitWidths{ab, 32});
  Table per_layer{{"layer", "weight_mse", "activation_mse", "weight_share", "activation_share"}, {}};
  for (const auto& l : report.layers) {
    per_layer.AddRow({l.layer, l.weight_mse, l.activation_mse, l.weight_share, l.activation_share});
  }
  Table modes{{"mode", "psnr", "ssim", "output_mse"}, {}};
  for (const auto& m : report.modes) modes.AddRow({m.mode, m.psnr, m.ssim, m.output_mse});
  WriteTableOutput(ctx, "sensitivity_layers", per_layer);
  WriteTableOutput(ctx, "sensitivity_modes", modes);
}

void Report(Context& ctx) {
  if (ctx.report_input.empty()) throw UsageError("report: --input PATH is required");
  const fs::path input(ctx.report_input);
  const std::string text = ReadTextFile(input);
  RecordInput(ctx, input);
  const std::string ext = input.extension().string();
  Table table;
  if (ext == ".jsonl") {
    table = ParseJsonLines(text);
  } else if (ext == ".csv") {
    table = ParseCsv(text);
  } else {
    throw UsageError("report: input must be a .jsonl or .csv file");
  }
  WriteTableOutput(ctx, "report_" + input.stem().string(), table);
}

void Dispatch(Context& ctx) {
  static const std::map<std::string, std::function<void(Context&)>> table = {
      {"gen-corpus", GenCorpus}, {"calibrate", Calibrate}, {"quantize", Quantize},
      {"eval", Eval},            {"ablate", Ablate},       {"sensitivity", Sensitivity},
      {"report", Report}};
  table.at(ctx.subcommand)(ctx);
}

void WriteManifest(Context& ctx) {
  Json config = Json::object();
  for (const auto& key : ConfigSchema()) config[key.key] = ctx.cfg.Get(key.key);
  Json manifest{{"tool", "harmoq"},
                {"version", kVersion},
                {"subcommand", ctx.subcommand},
                {"seed", ctx.cfg.seed()},
                {"threads", ctx.cfg.Count("run.threads")},
                {"config", config},
                {"inputs", ctx.inputs},
                {"outputs", ctx.outputs}};
  if (!ctx.report_input.empty()) manifest["report_input"] = ctx.report_input;
  if (ctx.projection_grid) manifest["projections"] = true;
  const fs::path path = ctx.out / "manifests" / (ctx.subcommand + ".json");
  WriteTextFile(path, manifest.dump(2) + "\n");
  *ctx.log << "wrote " << path.generic_string() << "\n";
}

struct Manifest {
  RunConfig cfg;
  std::string subcommand;
  std::string report_input;
  bool projections = false;
};

Manifest ReadManifest(const fs::path& path) {
  Json j;
  try {
    j = Json::parse(ReadTextFile(path));
  } catch (const nlohmann::json::exception&) {
    throw DataError(path.generic_string() + ": manifest is not valid JSON");
  }
  Manifest m;
  try {
    m.subcommand = j.at("subcommand").get<std::string>();
    for (const auto& item : j.at("config").items()) m.cfg.Set(item.key(), item.value().get<std::string>());
    m.report_input = j.value("report_input", std::string());
    m.projections = j.value("projections", false);
    for (const auto& item : j.at("inputs").items()) {
      const std::string digest = DigestFile(item.key());
      if (digest != item.value().get<std::string>()) {
        throw DataError("input " + item.key() + " changed since the manifest was written");
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw DataError(path.generic_string() + ": malformed manifest (" + e.what() + ")");
  }
  if (std::find(kSubcommands.begin(), kSubcommands.end(), m.subcommand) == kSubcommands.end()) {
    throw DataError(path.generic_string() + ": unknown subcommand '" + m.subcommand + "'");
  }
  return m;
}

// Pins derived paths so the manifest records where inputs actually came from.
void ResolvePaths(Context& ctx) {
  ctx.out = ctx.cfg.Get("run.out");
  ctx.format = ctx.cfg.Get("run.format");
  auto resolve = [&](const char* key, const char* leaf) {
    if (ctx.cfg.Get(key).empty()) ctx.cfg.Set(key, (ctx.out / leaf).generic_string());
    return fs::path(ctx.cfg.Get(key));
  };
  ctx.corpus = resolve("paths.corpus", "corpus");
  ctx.model = resolve("paths.model", "model");
  ctx.quant = resolve("paths.quant", "quant");
}

}  // namespace

int ExitCodeFor(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kUsage:
    case ErrorKind::kConfig:
      return 2;
    case ErrorKind::kIo:
    case ErrorKind::kData:
      return 3;
    case ErrorKind::kNumeric:
    case ErrorKind::kSingular:
      return 4;
    default:
      return 1;
  }
}

int Execute(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Harmonized post-training quantization toolkit", "harmoq"};
  app.set_version_flag("--version", std::string("harmoq ") + kVersion);

  std::string config_path;
  std::string manifest_path;
  Overrides global;
  Overrides local;
  std::vector<std::string> sets;
  auto shadow = [](CLI::App* target, Overrides& into, const std::string& flag,
                   const std::string& key, const std::string& help) {
    target->add_option_function<std::string>(
        flag, [&into, key](const std::string& v) { into.emplace_back(key, v); }, help + " (" + key + ")");
  };

  app.add_option("--config", config_path, "flat key = value configuration file");
  app.add_option("--manifest", manifest_path, "re-run the command recorded in a run manifest");
  shadow(&app, global, "--seed", "run.seed", "master seed");
  shadow(&app, global, "--threads", "run.threads", "worker threads");
  shadow(&app, global, "--out", "run.out", "output directory");
  shadow(&app, global, "--format", "run.format", "report format csv|jsonl");
  app.add_option("--set", sets, "KEY=VALUE override, repeatable");

  std::string report_input;
  bool projection_grid = false;
  std::map<std::string, CLI::App*> subs;
  for (const auto& name : kSubcommands) subs[name] = app.add_subcommand(name);
  subs["gen-corpus"]->description("write seeded train/calib/eval patches as PGM");
  shadow(subs["gen-corpus"], local, "--train-count", "corpus.train_count", "training patches");
  shadow(subs["gen-corpus"], local, "--calib-count", "corpus.calib_count", "calibration patches");
  shadow(subs["gen-corpus"], local, "--eval-count", "corpus.eval_count", "evaluation patches");
  shadow(subs["gen-corpus"], local, "--edge-density", "corpus.edge_density", "edge patch fraction");
  subs["calibrate"]->description("fit the toy network and report calibration statistics");
  subs["quantize"]->description("run the harmonized pipeline and write state + trace");
  subs["eval"]->description("PSNR/SSIM of full precision, baselines and the quantized state");
  subs["ablate"]->description("component ablation grid over all 8 subsets");
  subs["ablate"]->add_flag("--projections", projection_grid, "also emit the projection grid");
  subs["sensitivity"]->description("weight-only vs activation-only sensitivity per layer");
  shadow(subs["sensitivity"], local, "--weight-bits", "sensitivity.weight_bits", "weight-only bits");
  shadow(subs["sensitivity"], local, "--activation-bits", "sensitivity.activation_bits",
         "activation-only bits");
  subs["report"]->description("render a trace (.jsonl) or grid (.csv) in the chosen format");
  subs["report"]->add_option("--input", report_input, "trace or grid to render")->required();
  for (const char* name : {"quantize", "eval", "ablate"}) {
    shadow(subs[name], local, "--bits-w", "quant.bits_w", "weight bits");
    shadow(subs[name], local, "--bits-a", "quant.bits_a", "activation bits");
  }
  shadow(subs["quantize"], local, "--projection", "projection.kind", "projection kind");
  shadow(subs["quantize"], local, "--components", "pipeline.components", "enabled steps");
  shadow(subs["ablate"], local, "--projection", "projection.kind", "projection kind");
  app.require_subcommand(0, 1);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "harmoq: error: " << e.what() << "\n" << app.help();
    return 2;
  }

  try {
    Context ctx;
    ctx.log = &out;
    ctx.report_input = report_input;
    ctx.projection_grid = projection_grid;
    for (const auto& [name, sub] : subs) {
      if (sub->parsed()) ctx.subcommand = name;
    }
    if (!manifest_path.empty()) {
      Manifest m = ReadManifest(manifest_path);
      if (!ctx.subcommand.empty() && ctx.subcommand != m.subcommand) {
        throw UsageError("manifest records '" + m.subcommand + "', not '" + ctx.subcommand + "'");
      }
      ctx.subcommand = m.subcommand;
      ctx.cfg = std::move(m.cfg);
      // A replay into a new --out keeps reading the recorded inputs but writes
      // its own artifacts under the new directory.
      const bool moved = std::any_of(global.begin(), global.end(),
                                     [](const auto& kv) { return kv.first == "run.out"; });
      if (moved) {
        static const std::map<std::string, std::string> owned = {
            {"gen-corpus", "paths.corpus"}, {"calibrate", "paths.model"}, {"quantize", "paths.quant"}};
        const auto it = owned.find(ctx.subcommand);
        if (it != owned.end()) ctx.cfg.Set(it->second, "");
      }
      if (ctx.report_input.empty()) ctx.report_input = m.report_input;
      ctx.projection_grid = ctx.projection_grid || m.projections;
    } else if (!config_path.empty()) {
      ctx.cfg = RunConfig::FromFile(config_path);
    }
    if (ctx.subcommand.empty()) {
      err << "harmoq: error: no subcommand given\n" << app.help();
      return 2;
    }
    for (const auto& [k, v] : global) ctx.cfg.Set(k, v);
    for (const auto& [k, v] : local) ctx.cfg.Set(k, v);
    for (const auto& kv : sets) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) throw UsageError("--set expects KEY=VALUE, got '" + kv + "'");
      ctx.cfg.Set(kv.substr(0, eq), kv.substr(eq + 1));
    }
    ctx.cfg.Validate();
    ResolvePaths(ctx);
    Dispatch(ctx);
    WriteManifest(ctx);
    return 0;
  } catch (const Error& e) {
    err << "harmoq: error: " << e.what() << "\n";
    return ExitCodeFor(e.kind());
  } catch (const std::exception& e) {
    err << "harmoq: error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace harmoq
