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

// Runs the skyframe binary as a subprocess and checks exit codes, error
// records, output files and manifest re-runs.

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "gtest/gtest.h"
#include "nlohmann/json.hpp"

namespace skyframe {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct Result {
  int status = -1;
  std::string out;
  std::string err;
};

std::string ReadFile(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("skyframe_cli_test_" + std::to_string(::getpid()) + "_" +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  Result Run(const std::string& args) const {
    const fs::path err = dir_ / "stderr.txt";
    const std::string cmd =
        std::string(SKYFRAME_CLI_PATH) + " " + args + " 2>" + err.string();
    Result r;
    FILE* pipe = ::popen(cmd.c_str(), "r");
    if (pipe == nullptr) return r;
    std::array<char, 4096> buf;
    std::size_t n = 0;
    while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) {
      r.out.append(buf.data(), n);
    }
    const int status = ::pclose(pipe);
    r.status = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.err = ReadFile(err);
    return r;
  }

  fs::path Write(const std::string& name, const std::string& text) const {
    std::ofstream(dir_ / name) << text;
    return dir_ / name;
  }

  static void ExpectErrorRecord(const Result& r) {
    const auto brace = r.err.find('{');
    ASSERT_NE(brace, std::string::npos) << r.err;
    const json e = json::parse(r.err.substr(brace));
    EXPECT_TRUE(e.at("error").at("type").is_string());
    EXPECT_FALSE(e.at("error").at("message").get<std::string>().empty());
  }

  fs::path dir_;
};

constexpr char kTinyBench[] = R"({
  "schema_version": 1, "name": "tiny",
  "scenario": {"duration": 3, "world": {"kind": "spheres",
               "spheres": {"count": 5}}},
  "seeds": {"first": 3, "count": 2},
  "variants": [{"name": "x"}, {"name": "y", "overrides":
               {"planner": {"weights": {"occlusion": 0}}}}]
})";

TEST_F(CliTest, UsageErrorsExitTwo) {
  Result r = Run("frobnicate");
  EXPECT_EQ(r.status, 2);
  ExpectErrorRecord(r);
  r = Run("");
  EXPECT_EQ(r.status, 2);
  r = Run("plan-bench --config " + (dir_ / "missing.json").string());
  EXPECT_EQ(r.status, 2);
  ExpectErrorRecord(r);
  r = Run("plan-bench --config " +
          Write("bad.json", R"({"scenario": {"duration": -4}})").string() +
          " --out " + (dir_ / "o").string());
  EXPECT_EQ(r.status, 2);
  ExpectErrorRecord(r);
  r = Run("art-eval --config art_blockworld --out " + (dir_ / "o").string());
  EXPECT_EQ(r.status, 2);
  r = Run("grad-check --format xml --out " + (dir_ / "o").string());
  EXPECT_EQ(r.status, 2);
}

TEST_F(CliTest, RuntimeFailureExitsOne) {
  const fs::path blocker = Write("blocker", "not a directory");
  const Result r = Run("grad-check --out " + blocker.string());
  EXPECT_EQ(r.status, 1);
  ExpectErrorRecord(r);
}

TEST_F(CliTest, GradCheckPrintsJson) {
  const Result r = Run("grad-check --seed 7 --out " + (dir_ / "g").string());
  ASSERT_EQ(r.status, 0) << r.err;
  const json doc = json::parse(r.out);
  for (const char* term : {"smoothness", "obstacle", "occlusion", "shot"}) {
    EXPECT_TRUE(doc.at("terms").contains(term));
  }
  EXPECT_EQ(json::parse(ReadFile(dir_ / "g" / "grad_check.json")), doc);
  const json manifest = json::parse(ReadFile(dir_ / "g" / "manifest.json"));
  EXPECT_EQ(manifest.at("seed"), 7);
  EXPECT_EQ(manifest.at("subcommand"), "grad-check");
  EXPECT_TRUE(manifest.at("outputs").contains("grad_check.json"));
}

TEST_F(CliTest, PlanBenchTablesAndManifestRerun) {
  const fs::path config = Write("tiny.json", kTinyBench);
  const fs::path a = dir_ / "a";
  const fs::path b = dir_ / "b";
  Result r = Run("plan-bench --config " + config.string() + " --jobs 2 --out " +
                 a.string());
  ASSERT_EQ(r.status, 0) << r.err;
  const std::string runs = ReadFile(a / "runs.csv");
  EXPECT_EQ(runs.substr(0, runs.find('\n')),
            "variant,seed,horizon,visibility,mean_shot_distance,"
            "mean_normalized_cost,collision,cycles");
  EXPECT_EQ(std::count(runs.begin(), runs.end(), '\n'), 5);
  EXPECT_TRUE(fs::exists(a / "summary.csv"));
  EXPECT_TRUE(fs::exists(a / "runs" / "x-seed3.trace.json"));
  const json manifest = json::parse(ReadFile(a / "manifest.json"));
  EXPECT_FALSE(manifest.at("timing_outputs").empty());
  EXPECT_FALSE(manifest.at("outputs").contains("timing.csv"));

  r = Run("plan-bench --from-manifest " + (a / "manifest.json").string() +
          " --out " + b.string());
  ASSERT_EQ(r.status, 0) << r.err;
  const json again = json::parse(ReadFile(b / "manifest.json"));
  EXPECT_EQ(again.at("outputs"), manifest.at("outputs"));
  EXPECT_EQ(again.at("config_hash"), manifest.at("config_hash"));
  for (const auto& [name, hash] : manifest.at("outputs").items()) {
    EXPECT_EQ(ReadFile(a / name), ReadFile(b / name)) << name;
  }

  // A manifest only replays the command that wrote it.
  r = Run("map-bench --from-manifest " + (a / "manifest.json").string() +
          " --out " + (dir_ / "c").string());
  EXPECT_EQ(r.status, 2);
}

TEST_F(CliTest, PlanBenchJsonFormat) {
  const fs::path config = Write("tiny.json", kTinyBench);
  const Result r = Run("plan-bench --format json --config " + config.string() +
                       " --seed 9 --out " + (dir_ / "j").string());
  ASSERT_EQ(r.status, 0) << r.err;
  const json doc = json::parse(ReadFile(dir_ / "j" / "results.json"));
  ASSERT_EQ(doc.at("runs").size(), 4u);
  EXPECT_EQ(doc.at("runs")[0].at("seed"), 9);
  EXPECT_EQ(doc.at("runs")[1].at("seed"), 10);
}

TEST_F(CliTest, MapBenchAndReplayExport) {
  const fs::path config = Write("scenario.json", R"({"duration": 2, "seed": 4,
      "world": {"kind": "spheres", "spheres": {"count": 6}}})");
  Result r = Run("map-bench --config " + config.string() + " --out " +
                 (dir_ / "m").string());
  ASSERT_EQ(r.status, 0) << r.err;
  const std::string scans = ReadFile(dir_ / "m" / "scans.csv");
  EXPECT_EQ(scans.substr(0, scans.find(',')), "scan");
  EXPECT_EQ(std::count(scans.begin(), scans.end(), '\n'), 6);
  r = Run("replay-export --config " + config.string() + " --out " +
          (dir_ / "r").string());
  ASSERT_EQ(r.status, 0) << r.err;
  const json trace = json::parse(ReadFile(dir_ / "r" / "trace.json"));
  EXPECT_EQ(trace.at("cycles").size(), 2u);
  EXPECT_TRUE(json::parse(ReadFile(dir_ / "r" / "metrics.json"))
                  .contains("visibility"));
}

}  // namespace
}  // namespace skyframe
