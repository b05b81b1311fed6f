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

#ifndef SKYFRAME_SIM_BENCH_H_
#define SKYFRAME_SIM_BENCH_H_

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "skyframe/sim/scenario.h"

namespace skyframe {
namespace sim {

// One named scenario variant: a JSON merge patch applied to the base
// scenario.
struct BenchVariant {
  std::string name;
  std::string overrides = "{}";
};

// Plan benchmark: every variant runs on seeds first_seed, first_seed + 1,
// ..., first_seed + seed_count - 1.
struct BenchConfig {
  std::string name = "bench";
  std::string scenario = "{}";  // base scenario JSON
  std::uint64_t first_seed = 1;
  int seed_count = 1;
  std::vector<BenchVariant> variants;

  // Parses every variant scenario; throws InvalidArgument on the first bad
  // one.
  void Validate() const;
  // Scenario for one variant and seed.
  ScenarioConfig Scenario(const BenchVariant& variant,
                          std::uint64_t seed) const;
};

// JSON schema:
//   {"schema_version": 1, "name": ..., "scenario": {...},
//    "seeds": {"first": 1, "count": 30},
//    "variants": [{"name": ..., "overrides": {...}}, ...]}
// A config without "variants" runs the base scenario as variant "base".
BenchConfig BenchFromJson(const std::string& text);
std::string BenchToJson(const BenchConfig& config);

struct BenchRun {
  std::string variant;
  std::uint64_t seed = 0;
  double horizon = 0.0;
  RunMetrics metrics;
  Trace trace;
};

// Runs every (variant, seed) pair on up to `jobs` threads. Results are in
// variant order, then seed order, whatever the scheduling. A failing run
// aborts the bench with an error naming the variant and seed.
std::vector<BenchRun> RunBench(const BenchConfig& config, int jobs);

// One row per run: variant, seed, horizon, visibility, mean shot distance,
// mean normalized cost, collision, cycles.
void WriteBenchRunsCsv(std::ostream& out, const std::vector<BenchRun>& runs);
// One row per variant with means over its seeds, in variant order.
void WriteBenchSummaryCsv(std::ostream& out, const std::vector<BenchRun>& runs);
// Planning wall times per run (mean, median, max in ms), kept apart from the
// reproducible outputs.
void WriteBenchTimingCsv(std::ostream& out, const std::vector<BenchRun>& runs);
// Runs and per-variant summary as one JSON document, without timing.
std::string BenchResultsToJson(const std::vector<BenchRun>& runs);

}  // namespace sim
}  // namespace skyframe

#endif  // SKYFRAME_SIM_BENCH_H_
