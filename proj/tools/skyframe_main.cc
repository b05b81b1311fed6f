/*
 * Copyright 2026 The Skyframe Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// skyframe: benchmark and training harness.
//
//   skyframe <subcommand> [--config <path|name>] [--out <dir>] [--seed <u64>]
//            [--jobs <n>] [--format {csv,json}] [--from-manifest <file>]
//
// Every run writes manifest.json next to its outputs. The manifest holds
// the effective config, the seed, the arguments and a hash of every
// reproducible output; `--from-manifest` re-runs from it.
//
// Exit codes: 0 success, 1 runtime failure, 2 usage or config error. Errors
// are printed to stderr as one JSON record.

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "skyframe/core/seed.h"
#include "skyframe/core/types.h"
#include "skyframe/mapping/map_io.h"
#include "skyframe/sim/art.h"
#include "skyframe/sim/bench.h"
#include "skyframe/sim/grad_check.h"
#include "skyframe/sim/map_bench.h"
#include "skyframe/sim/scenario.h"

#ifndef SKYFRAME_VERSION
#define SKYFRAME_VERSION "0.0.0"
#endif
#ifndef SKYFRAME_CONFIG_DIR
#define SKYFRAME_CONFIG_DIR "configs"
#endif

namespace skyframe {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

constexpr char kOutDirEnv[] = "SKYFRAME_OUT_DIR";
constexpr char kConfigDirEnv[] = "SKYFRAME_CONFIG_DIR";

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void PrintError(const std::string& type, const std::string& message) {
  std::cerr << json({{"error", {{"type", type}, {"message", message}}}}).dump()
            << std::endl;
}

std::string Hex(std::uint64_t value) {
  std::ostringstream s;
  s << std::hex << std::setw(16) << std::setfill('0') << value;
  return s.str();
}

std::string ReadFile(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read " + path.string());
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// A config argument is a file path, or the bare name of a file in the
// config directory.
fs::path ResolveConfig(const std::string& arg) {
  if (fs::exists(arg)) return arg;
  if (arg.find('/') == std::string::npos && fs::path(arg).extension().empty()) {
    const char* env = std::getenv(kConfigDirEnv);
    const fs::path dir = env != nullptr ? env : SKYFRAME_CONFIG_DIR;
    const fs::path candidate = dir / (arg + ".json");
    if (fs::exists(candidate)) return candidate;
  }
  throw UsageError("config not found: " + arg);
}

struct Options {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  int jobs = 1;
  std::string format;
  std::string policy;
  double slice_z = 2.0;
  std::string from_manifest;
  bool verbose = false;
};

// Collects the outputs of one run and writes the manifest.
class OutputDir {
 public:
  explicit OutputDir(fs::path dir) : dir_(std::move(dir)) {
    fs::create_directories(dir_);
  }

  const fs::path& path() const { return dir_; }

  // Reproducible output; its hash goes into the manifest.
  void Write(const std::string& name, const std::string& content) {
    WriteRaw(name, content);
    outputs_[name] = Hex(Fnv1a(content));
  }

  // Wall-time output; listed in the manifest without a hash.
  void WriteTiming(const std::string& name, const std::string& content) {
    WriteRaw(name, content);
    timing_.push_back(name);
  }

  void WriteManifest(json manifest) const {
    manifest["outputs"] = outputs_;
    manifest["timing_outputs"] = timing_;
    std::ofstream out(dir_ / "manifest.json", std::ios::binary);
    out << manifest.dump(2) << "\n";
    if (!out) throw std::runtime_error("cannot write manifest.json");
  }

 private:
  void WriteRaw(const std::string& name, const std::string& content) const {
    const fs::path path = dir_ / name;
    fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    out << content;
    if (!out) throw std::runtime_error("cannot write " + path.string());
  }

  fs::path dir_;
  json outputs_ = json::object();
  json timing_ = json::array();
};

// Resolved inputs of one run: the config text, the seed override and any
// extra inputs, from the command line or from a manifest.
struct RunInputs {
  std::string config_text;
  std::optional<std::uint64_t> seed;
  json extra = json::object();
};

template <typename F>
std::string Table(F&& write) {
  std::ostringstream s;
  write(s);
  return s.str();
}

std::string Format(const Options& options, const std::string& fallback) {
  const std::string f = options.format.empty() ? fallback : options.format;
  if (f != "csv" && f != "json") {
    throw UsageError("--format must be csv or json");
  }
  return f;
}

// Parses a config and turns library validation errors into usage errors.
template <typename F>
auto ParseConfig(F&& parse) -> decltype(parse()) {
  try {
    return parse();
  } catch (const InvalidArgument& e) {
    throw UsageError(e.what());
  }
}

struct Effective {
  json config;
  std::uint64_t seed = 0;
  json args = json::object();
  json inputs = json::object();
};

Effective PlanBenchCommand(const Options& o, const RunInputs& in,
                           OutputDir* out) {
  sim::BenchConfig bench = ParseConfig([&] {
    sim::BenchConfig b = sim::BenchFromJson(in.config_text);
    if (in.seed) b.first_seed = *in.seed;
    b.Validate();
    return b;
  });
  const std::string format = Format(o, "csv");
  if (o.jobs < 1) throw UsageError("--jobs must be at least 1");
  if (o.verbose) {
    std::cerr << "plan-bench: " << bench.variants.size() << " variants x "
              << bench.seed_count << " seeds on " << o.jobs << " jobs\n";
  }
  const std::vector<sim::BenchRun> runs = sim::RunBench(bench, o.jobs);
  for (const sim::BenchRun& r : runs) {
    const std::string stem =
        "runs/" + r.variant + "-seed" + std::to_string(r.seed);
    out->Write(stem + ".trace.json", sim::TraceToJson(r.trace));
    if (format == "csv") {
      out->Write(stem + ".cycles.csv",
                 Table([&](std::ostream& s) { WriteCycleCsv(s, r.trace); }));
    }
  }
  if (format == "csv") {
    out->Write("runs.csv",
               Table([&](std::ostream& s) { WriteBenchRunsCsv(s, runs); }));
    out->Write("summary.csv",
               Table([&](std::ostream& s) { WriteBenchSummaryCsv(s, runs); }));
  } else {
    out->Write("results.json", sim::BenchResultsToJson(runs));
  }
  out->WriteTiming("timing.csv", Table([&](std::ostream& s) {
                     WriteBenchTimingCsv(s, runs);
                   }));
  return {json::parse(sim::BenchToJson(bench)),
          bench.first_seed,
          {{"jobs", o.jobs}, {"format", format}}};
}

Effective MapBenchCommand(const Options& o, const RunInputs& in,
                          OutputDir* out) {
  sim::ScenarioConfig config = ParseConfig([&] {
    sim::ScenarioConfig c = sim::ScenarioFromJson(in.config_text);
    if (in.seed) c.seed = *in.seed;
    c.Validate();
    return c;
  });
  const std::string format = Format(o, "csv");
  const sim::MapBenchResult result = sim::RunMapBench(config);
  if (format == "csv") {
    out->Write("scans.csv",
               Table([&](std::ostream& s) { WriteMapBenchCsv(s, result); }));
  } else {
    json scans = json::array();
    for (const sim::MapBenchScan& s : result.scans) {
      scans.push_back({{"time", s.time},
                       {"sensor", {s.sensor.x(), s.sensor.y(), s.sensor.z()}},
                       {"returns", s.returns},
                       {"hits", s.hits},
                       {"border_added", s.border_added},
                       {"border_removed", s.border_removed},
                       {"free", s.free},
                       {"occupied", s.occupied},
                       {"unknown", s.unknown},
                       {"agreement", s.agreement},
                       {"version", s.version}});
    }
    out->Write("scans.json", json({{"scans", scans}}).dump(2) + "\n");
  }
  const mapping::GridGeometry& geo = result.world->geometry();
  const int layer =
      geo.IndexOf(WorldPoint(geo.origin.x(), geo.origin.y(), o.slice_z)).z();
  if (layer < 0 || layer >= geo.dims.z()) {
    throw UsageError("--slice-z lies outside the world box");
  }
  out->Write("terrain.csv", Table([&](std::ostream& s) {
               mapping::WriteHeightMapCsv(s, result.world->terrain());
             }));
  out->Write("terrain.pgm", Table([&](std::ostream& s) {
               mapping::WriteHeightMapPgm(s, result.world->terrain());
             }));
  for (const auto& [name, view] :
       {std::pair{std::string("truth"), result.world->view()},
        std::pair{std::string("mapped"), result.map->view()}}) {
    out->Write("sdf_" + name + ".csv", Table([&](std::ostream& s) {
                 mapping::WriteDistanceSliceCsv(s, view, layer);
               }));
    out->Write("sdf_" + name + ".pgm", Table([&](std::ostream& s) {
                 mapping::WriteDistanceSlicePgm(s, view, layer);
               }));
  }
  out->WriteTiming("timing.csv", Table([&](std::ostream& s) {
                     WriteMapBenchTimingCsv(s, result);
                   }));
  return {json::parse(sim::ScenarioToJson(config)),
          config.seed,
          {{"format", format}, {"slice_z", o.slice_z}}};
}

Effective GradCheckCommand(const Options& o, const RunInputs& in,
                           OutputDir* out) {
  sim::GradCheckConfig config = ParseConfig([&] {
    sim::GradCheckConfig c = sim::GradCheckConfigFromJson(in.config_text);
    if (in.seed) c.seed = *in.seed;
    c.Validate();
    return c;
  });
  const std::string format = Format(o, "json");
  const sim::GradCheckResult result = sim::RunGradCheck(config);
  const std::string report = sim::GradCheckToJson(result);
  if (format == "json") {
    out->Write("grad_check.json", report);
  } else {
    out->Write("grad_check.csv", Table([&](std::ostream& s) {
                 s.precision(10);
                 s << "term,max_relative_error,nonzero,instances\n";
                 for (const auto& [name, t] :
                      {std::pair{"smoothness", result.smoothness},
                       std::pair{"obstacle", result.obstacle},
                       std::pair{"occlusion", result.occlusion},
                       std::pair{"shot", result.shot}}) {
                   s << name << "," << t.max_relative_error << "," << t.nonzero
                     << "," << result.instances << "\n";
                 }
               }));
  }
  std::cout << report;
  return {json::parse(sim::GradCheckConfigToJson(config)),
          config.seed,
          {{"format", format}}};
}

void WriteArtLog(
    OutputDir* out, const std::string& stem, const std::string& format,
    const std::vector<
        std::pair<std::string, const std::vector<sim::ArtEpisode>*>>& logs) {
  if (format == "csv") {
    std::ostringstream s;
    bool first = true;
    for (const auto& [label, episodes] : logs) {
      std::ostringstream part;
      sim::WriteEpisodeCsv(part, *episodes, label);
      std::string text = part.str();
      // Keep a single header when several policies share one file.
      if (!first) text = text.substr(text.find('\n') + 1);
      s << text;
      first = false;
    }
    out->Write(stem + ".csv", s.str());
    return;
  }
  json doc = json::object();
  for (const auto& [label, episodes] : logs) {
    json list = json::array();
    for (const sim::ArtEpisode& e : *episodes) {
      json steps = json::array();
      for (const sim::ArtStep& st : e.steps) {
        steps.push_back({{"shot", st.action},
                         {"step_reward", st.step_reward},
                         {"alpha", st.alpha},
                         {"crashed", st.crashed},
                         {"reward", st.reward},
                         {"frames", st.frames}});
      }
      list.push_back({{"seed", e.seed},
                      {"mean_reward", e.MeanReward()},
                      {"steps", steps}});
    }
    doc[label] = list;
  }
  out->Write(stem + ".json", doc.dump(2) + "\n");
}

Effective ArtTrainCommand(const Options& o, const RunInputs& in,
                          OutputDir* out) {
  sim::ArtConfig config = ParseConfig([&] {
    sim::ArtConfig c = sim::ArtConfigFromJson(in.config_text);
    if (in.seed) c.train_seed = *in.seed;
    c.Validate();
    return c;
  });
  const std::string format = Format(o, "csv");
  sim::TrainLog log;
  const artistic::QFunction q = sim::TrainPolicy(config, &log);
  out->Write("policy.json", q.ToJson());
  WriteArtLog(out, "train_log", format, {{"train", &log.episodes}});
  return {json::parse(sim::ArtConfigToJson(config)),
          config.train_seed,
          {{"format", format}}};
}

Effective ArtEvalCommand(const Options& o, const RunInputs& in,
                         OutputDir* out) {
  sim::ArtConfig config = ParseConfig([&] {
    sim::ArtConfig c = sim::ArtConfigFromJson(in.config_text);
    if (in.seed) c.eval_seed = *in.seed;
    c.Validate();
    return c;
  });
  if (!in.extra.contains("policy")) {
    throw UsageError("art-eval needs --policy <policy.json>");
  }
  const json policy = in.extra.at("policy");
  const artistic::QFunction q =
      ParseConfig([&] { return artistic::QFunction::FromJson(policy.dump()); });
  const std::string format = Format(o, "csv");
  const sim::PolicyEvaluation eval = sim::EvaluatePolicy(config, q);
  WriteArtLog(out, "eval_log", format,
              {{"greedy", &eval.greedy}, {"random", &eval.random}});
  const json summary = {{"episodes", config.eval_episodes},
                        {"eval_seed", config.eval_seed},
                        {"greedy_mean", eval.greedy_mean},
                        {"random_mean", eval.random_mean},
                        {"margin", eval.greedy_mean - eval.random_mean}};
  out->Write("eval_summary.json", summary.dump(2) + "\n");
  std::cout << summary.dump(2) << "\n";
  return {json::parse(sim::ArtConfigToJson(config)),
          config.eval_seed,
          {{"format", format}},
          {{"policy", policy}}};
}

Effective ReplayExportCommand(const Options& o, const RunInputs& in,
                              OutputDir* out) {
  sim::ScenarioConfig config = ParseConfig([&] {
    sim::ScenarioConfig c = sim::ScenarioFromJson(in.config_text);
    if (in.seed) c.seed = *in.seed;
    c.Validate();
    return c;
  });
  const std::string format = Format(o, "csv");
  sim::Trace trace;
  const sim::RunMetrics metrics = sim::RunScenario(config, &trace);
  out->Write("trace.json", sim::TraceToJson(trace));
  out->Write("metrics.json", sim::MetricsToJson(metrics, false));
  if (format == "csv") {
    out->Write("cycles.csv",
               Table([&](std::ostream& s) { WriteCycleCsv(s, trace); }));
  }
  // World dumps from a fresh build of the same world.
  sim::Simulation sim(config);
  const sim::World& world = sim.world();
  const mapping::GridGeometry& geo = world.geometry();
  const int layer =
      geo.IndexOf(WorldPoint(geo.origin.x(), geo.origin.y(), o.slice_z)).z();
  if (layer < 0 || layer >= geo.dims.z()) {
    throw UsageError("--slice-z lies outside the world box");
  }
  out->Write("terrain.csv", Table([&](std::ostream& s) {
               mapping::WriteHeightMapCsv(s, world.terrain());
             }));
  out->Write("terrain.pgm", Table([&](std::ostream& s) {
               mapping::WriteHeightMapPgm(s, world.terrain());
             }));
  out->Write("sdf_slice.csv", Table([&](std::ostream& s) {
               mapping::WriteDistanceSliceCsv(s, world.view(), layer);
             }));
  out->Write("sdf_slice.pgm", Table([&](std::ostream& s) {
               mapping::WriteDistanceSlicePgm(s, world.view(), layer);
             }));
  out->WriteTiming("timing.csv",
                   Table([&](std::ostream& s) { WriteTimingCsv(s, trace); }));
  return {json::parse(sim::ScenarioToJson(config)),
          config.seed,
          {{"format", format}, {"slice_z", o.slice_z}}};
}

using Handler = Effective (*)(const Options&, const RunInputs&, OutputDir*);

struct Subcommand {
  const char* name;
  const char* help;
  Handler handler;
  bool needs_config;
};

constexpr Subcommand kSubcommands[] = {
    {"plan-bench", "Run scenario variants over seeds; per-run metrics.",
     PlanBenchCommand, true},
    {"map-bench", "Integrate simulated scans along a scenario; map stats.",
     MapBenchCommand, true},
    {"grad-check", "Compare analytic and finite-difference cost gradients.",
     GradCheckCommand, false},
    {"art-train", "Train the shot-selection policy.", ArtTrainCommand, true},
    {"art-eval", "Evaluate a trained policy against random shots.",
     ArtEvalCommand, true},
    {"replay-export", "Run one scenario; export trace and world dumps.",
     ReplayExportCommand, true},
};

// Applies manifest contents to the options and returns the run inputs.
RunInputs InputsFromManifest(const std::string& subcommand, Options* o) {
  json manifest;
  try {
    manifest = json::parse(ReadFile(o->from_manifest));
  } catch (const json::exception& e) {
    throw UsageError(std::string("bad manifest: ") + e.what());
  }
  if (manifest.value("subcommand", "") != subcommand) {
    throw UsageError("manifest was written by " +
                     manifest.value("subcommand", std::string("?")) + ", not " +
                     subcommand);
  }
  if (!o->config.empty() || o->seed) {
    throw UsageError("--from-manifest excludes --config and --seed");
  }
  RunInputs in;
  try {
    in.config_text = manifest.at("config").dump();
    const json& args = manifest.at("args");
    if (args.contains("jobs")) o->jobs = args.at("jobs").get<int>();
    if (args.contains("format")) {
      o->format = args.at("format").get<std::string>();
    }
    if (args.contains("slice_z")) o->slice_z = args.at("slice_z").get<double>();
    in.extra = manifest.value("inputs", json::object());
  } catch (const json::exception& e) {
    throw UsageError(std::string("bad manifest: ") + e.what());
  }
  return in;
}

RunInputs InputsFromFlags(const Subcommand& sub, const Options& o) {
  RunInputs in;
  in.seed = o.seed;
  if (o.config.empty()) {
    if (sub.needs_config) {
      throw UsageError(std::string(sub.name) + " needs --config");
    }
    in.config_text = "{}";
  } else {
    in.config_text = ReadFile(ResolveConfig(o.config));
  }
  if (!o.policy.empty()) {
    try {
      in.extra["policy"] = json::parse(ReadFile(o.policy));
    } catch (const json::exception& e) {
      throw UsageError(std::string("bad policy file: ") + e.what());
    }
  }
  return in;
}

fs::path DefaultOutDir(const std::string& subcommand) {
  const char* env = std::getenv(kOutDirEnv);
  return fs::path(env != nullptr ? env : "skyframe_out") / subcommand;
}

int Run(int argc, char** argv) {
  CLI::App app{"skyframe: camera trajectory planning benchmarks"};
  app.require_subcommand(1);
  app.set_version_flag("--version", SKYFRAME_VERSION);
  Options o;
  for (const Subcommand& sub : kSubcommands) {
    CLI::App* cmd = app.add_subcommand(sub.name, sub.help);
    cmd->add_option("--config", o.config,
                    "Config file, or a config name from $SKYFRAME_CONFIG_DIR");
    cmd->add_option("--out", o.out,
                    "Output directory (default $SKYFRAME_OUT_DIR/<command>)");
    cmd->add_option("--seed", o.seed, "Seed override");
    cmd->add_option("--jobs", o.jobs, "Worker threads")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--format", o.format, "Table format")
        ->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--from-manifest", o.from_manifest,
                    "Re-run from a manifest written by this command");
    cmd->add_flag("-v,--verbose", o.verbose, "Progress on stderr");
    if (std::string(sub.name) == "art-eval") {
      cmd->add_option("--policy", o.policy, "Policy written by art-train");
    }
    if (std::string(sub.name) == "map-bench" ||
        std::string(sub.name) == "replay-export") {
      cmd->add_option("--slice-z", o.slice_z,
                      "Height of the distance-field slice dump, m");
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    PrintError("usage", e.what());
    return kExitUsage;
  }

  const Subcommand* sub = nullptr;
  for (const Subcommand& s : kSubcommands) {
    if (app.got_subcommand(s.name)) sub = &s;
  }

  try {
    const RunInputs in = o.from_manifest.empty()
                             ? InputsFromFlags(*sub, o)
                             : InputsFromManifest(sub->name, &o);
    OutputDir out(o.out.empty() ? DefaultOutDir(sub->name) : fs::path(o.out));
    const Effective effective = sub->handler(o, in, &out);
    const std::string config_text = effective.config.dump();
    json manifest = {{"tool", "skyframe"},
                     {"version", SKYFRAME_VERSION},
                     {"subcommand", sub->name},
                     {"seed", effective.seed},
                     {"config_hash", Hex(Fnv1a(config_text))},
                     {"args", effective.args},
                     {"config", effective.config}};
    if (!effective.inputs.empty()) manifest["inputs"] = effective.inputs;
    out.WriteManifest(manifest);
    if (o.verbose) {
      std::cerr << "wrote " << (out.path() / "manifest.json").string() << "\n";
    }
    return kExitOk;
  } catch (const UsageError& e) {
    PrintError("usage", e.what());
    return kExitUsage;
  } catch (const std::exception& e) {
    PrintError("runtime", e.what());
    return kExitRuntime;
  }
}

}  // namespace
}  // namespace skyframe

int main(int argc, char** argv) { return skyframe::Run(argc, argv); }
