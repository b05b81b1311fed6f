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

#include "skyframe/sim/bench.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <numeric>
#include <thread>
#include <utility>

#include "json.hpp"
#include "sim/json_reader.h"

namespace skyframe {
namespace sim {
namespace {

using internal::Reader;
using nlohmann::json;

constexpr int kSchemaVersion = 1;

double Mean(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  return std::accumulate(v.begin(), v.end(), 0.0) / v.size();
}

double StdDev(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double mean = Mean(v);
  double sq = 0.0;
  for (const double x : v) sq += (x - mean) * (x - mean);
  return std::sqrt(sq / (v.size() - 1));
}

double Median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

struct VariantSummary {
  std::string variant;
  double horizon = 0.0;
  std::vector<double> visibility;
  std::vector<double> shot_distance;
  std::vector<double> normalized_cost;
  int collisions = 0;
};

std::vector<VariantSummary> Summarize(const std::vector<BenchRun>& runs) {
  std::vector<VariantSummary> out;
  for (const BenchRun& r : runs) {
    if (out.empty() || out.back().variant != r.variant) {
      VariantSummary s;
      s.variant = r.variant;
      s.horizon = r.horizon;
      out.push_back(std::move(s));
    }
    VariantSummary& s = out.back();
    s.visibility.push_back(r.metrics.visibility);
    s.shot_distance.push_back(r.metrics.mean_shot_distance);
    s.normalized_cost.push_back(r.metrics.mean_normalized_cost);
    if (r.metrics.collision) ++s.collisions;
  }
  return out;
}

}  // namespace

void BenchConfig::Validate() const {
  if (seed_count < 1) {
    throw InvalidArgument("bench: seeds.count must be at least 1");
  }
  if (variants.empty()) throw InvalidArgument("bench: no variants");
  for (std::size_t i = 0; i < variants.size(); ++i) {
    if (variants[i].name.empty()) {
      throw InvalidArgument("bench: variant " + std::to_string(i) +
                            " has no name");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (variants[j].name == variants[i].name) {
        throw InvalidArgument("bench: duplicate variant " + variants[i].name);
      }
    }
    Scenario(variants[i], first_seed);
  }
}

ScenarioConfig BenchConfig::Scenario(const BenchVariant& variant,
                                     std::uint64_t seed) const {
  try {
    json doc = json::parse(scenario);
    doc.merge_patch(json::parse(variant.overrides));
    doc["seed"] = seed;
    ScenarioConfig config = ScenarioFromJson(doc.dump());
    config.name = name + "/" + variant.name;
    return config;
  } catch (const json::exception& e) {
    throw InvalidArgument("bench: variant " + variant.name + ": " + e.what());
  } catch (const InvalidArgument& e) {
    throw InvalidArgument("bench: variant " + variant.name + ": " + e.what());
  }
}

BenchConfig BenchFromJson(const std::string& text) {
  BenchConfig c;
  try {
    const json doc = json::parse(text);
    Reader r(doc, "bench");
    int version = kSchemaVersion;
    r.Get("schema_version", &version);
    if (version != kSchemaVersion) {
      throw InvalidArgument("bench: unsupported schema_version " +
                            std::to_string(version));
    }
    r.Get("name", &c.name);
    if (const auto it = doc.find("scenario"); it != doc.end()) {
      if (!it->is_object()) {
        throw InvalidArgument("config: bench.scenario must be an object");
      }
      c.scenario = it->dump();
      r.Skip("scenario");
    }
    if (auto s = r.Child("seeds")) {
      s->Get("first", &c.first_seed);
      s->Get("count", &c.seed_count);
      s->Finish();
    }
    if (const auto it = doc.find("variants"); it != doc.end()) {
      if (!it->is_array()) {
        throw InvalidArgument("config: bench.variants must be an array");
      }
      for (const json& v : *it) {
        Reader vr(v, "bench.variants[]");
        BenchVariant variant;
        vr.Get("name", &variant.name);
        if (const auto o = v.find("overrides"); o != v.end()) {
          variant.overrides = o->dump();
          vr.Skip("overrides");
        }
        vr.Finish();
        c.variants.push_back(variant);
      }
      r.Skip("variants");
    } else {
      c.variants.push_back({"base", "{}"});
    }
    r.Finish();
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("bench: ") + e.what());
  }
  c.Validate();
  return c;
}

std::string BenchToJson(const BenchConfig& c) {
  json variants = json::array();
  for (const BenchVariant& v : c.variants) {
    variants.push_back(
        {{"name", v.name}, {"overrides", json::parse(v.overrides)}});
  }
  const json doc = {
      {"schema_version", kSchemaVersion},
      {"name", c.name},
      {"scenario", json::parse(c.scenario)},
      {"seeds", {{"first", c.first_seed}, {"count", c.seed_count}}},
      {"variants", variants}};
  return doc.dump(2) + "\n";
}

std::vector<BenchRun> RunBench(const BenchConfig& config, int jobs) {
  if (jobs < 1) throw InvalidArgument("bench: jobs must be at least 1");
  config.Validate();
  const std::size_t per_variant = static_cast<std::size_t>(config.seed_count);
  const std::size_t total = config.variants.size() * per_variant;
  std::vector<BenchRun> runs(total);

  std::atomic<std::size_t> next{0};
  std::mutex error_mutex;
  std::exception_ptr error;
  std::size_t error_index = total;
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= total) return;
      {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (error) return;
      }
      const BenchVariant& variant = config.variants[i / per_variant];
      const std::uint64_t seed = config.first_seed + i % per_variant;
      BenchRun& run = runs[i];
      run.variant = variant.name;
      run.seed = seed;
      try {
        const ScenarioConfig scenario = config.Scenario(variant, seed);
        run.horizon = scenario.planner.horizon;
        run.metrics = RunScenario(scenario, &run.trace);
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> lock(error_mutex);
        // Keep the lowest failing index so the report does not depend on
        // scheduling.
        if (i < error_index) {
          error_index = i;
          error = std::make_exception_ptr(
              std::runtime_error("bench: variant " + variant.name + " seed " +
                                 std::to_string(seed) + ": " + e.what()));
        }
      }
    }
  };
  const int threads = static_cast<int>(
      std::min<std::size_t>(static_cast<std::size_t>(jobs), total));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }
  if (error) std::rethrow_exception(error);
  return runs;
}

void WriteBenchRunsCsv(std::ostream& out, const std::vector<BenchRun>& runs) {
  const auto precision = out.precision(10);
  out << "variant,seed,horizon,visibility,mean_shot_distance,"
         "mean_normalized_cost,collision,cycles\n";
  for (const BenchRun& r : runs) {
    out << r.variant << "," << r.seed << "," << r.horizon << ","
        << r.metrics.visibility << "," << r.metrics.mean_shot_distance << ","
        << r.metrics.mean_normalized_cost << ","
        << (r.metrics.collision ? 1 : 0) << ","
        << r.metrics.normalized_cost.size() << "\n";
  }
  out.precision(precision);
}

void WriteBenchSummaryCsv(std::ostream& out,
                          const std::vector<BenchRun>& runs) {
  const auto precision = out.precision(10);
  out << "variant,horizon,runs,visibility_mean,visibility_sd,"
         "shot_distance_mean,shot_distance_sd,normalized_cost_mean,"
         "normalized_cost_sd,collisions\n";
  for (const VariantSummary& s : Summarize(runs)) {
    out << s.variant << "," << s.horizon << "," << s.visibility.size() << ","
        << Mean(s.visibility) << "," << StdDev(s.visibility) << ","
        << Mean(s.shot_distance) << "," << StdDev(s.shot_distance) << ","
        << Mean(s.normalized_cost) << "," << StdDev(s.normalized_cost) << ","
        << s.collisions << "\n";
  }
  out.precision(precision);
}

void WriteBenchTimingCsv(std::ostream& out, const std::vector<BenchRun>& runs) {
  const auto precision = out.precision(10);
  out << "variant,seed,horizon,cycles,mean_cycle_ms,median_cycle_ms,"
         "max_cycle_ms\n";
  for (const BenchRun& r : runs) {
    const std::vector<double>& ms = r.metrics.cycle_wall_ms;
    out << r.variant << "," << r.seed << "," << r.horizon << "," << ms.size()
        << "," << Mean(ms) << "," << Median(ms) << ","
        << (ms.empty() ? 0.0 : *std::max_element(ms.begin(), ms.end())) << "\n";
  }
  out.precision(precision);
}

std::string BenchResultsToJson(const std::vector<BenchRun>& runs) {
  json run_list = json::array();
  for (const BenchRun& r : runs) {
    run_list.push_back(
        {{"variant", r.variant},
         {"seed", r.seed},
         {"horizon", r.horizon},
         {"metrics", json::parse(MetricsToJson(r.metrics, false))}});
  }
  json summary = json::array();
  for (const VariantSummary& s : Summarize(runs)) {
    summary.push_back({{"variant", s.variant},
                       {"horizon", s.horizon},
                       {"runs", s.visibility.size()},
                       {"visibility_mean", Mean(s.visibility)},
                       {"visibility_sd", StdDev(s.visibility)},
                       {"shot_distance_mean", Mean(s.shot_distance)},
                       {"shot_distance_sd", StdDev(s.shot_distance)},
                       {"normalized_cost_mean", Mean(s.normalized_cost)},
                       {"normalized_cost_sd", StdDev(s.normalized_cost)},
                       {"collisions", s.collisions}});
  }
  return json({{"runs", run_list}, {"summary", summary}}).dump(2) + "\n";
}

}  // namespace sim
}  // namespace skyframe
