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

#ifndef SKYFRAME_SIM_SCENARIO_H_
#define SKYFRAME_SIM_SCENARIO_H_

#include <cstdint>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "Eigen/Core"
#include "skyframe/core/types.h"
#include "skyframe/forecast/forecast.h"
#include "skyframe/mapping/map_store.h"
#include "skyframe/planner/planner.h"
#include "skyframe/sim/world.h"

namespace skyframe {
namespace sim {

enum class ActorScriptKind { kPolyline, kRandomWalk };

struct ActorConfig {
  ActorScriptKind script = ActorScriptKind::kPolyline;
  // Polyline vertices (x, y); the actor walks them at `speed`.
  std::vector<Eigen::Vector2d> waypoints = {Eigen::Vector2d(15, 25),
                                            Eigen::Vector2d(45, 25)};
  double speed = 1.5;
  // Random walk: start point, heading change per second (std dev, rad) and
  // the margin kept from the world edges.
  double turn_sigma = 0.3;
  double edge_margin = 8.0;
  forecast::ActorKind filter = forecast::ActorKind::kPerson;
  double measurement_rate = 10.0;  // Hz
  double measurement_noise = 0.0;  // position std dev, m
};

struct ScenarioConfig {
  std::string name = "scenario";
  std::uint64_t seed = 1;
  double duration = 25.0;      // s
  double replan_period = 1.0;  // s
  double metric_period = 0.1;  // s
  // Online mapping: the planner sees only the map built from simulated
  // LiDAR scans taken every scan_period; otherwise it sees the true world.
  bool online_mapping = false;
  double scan_period = 0.5;  // s
  // UAV start relative to the actor's first pose; empty means the shot
  // offset.
  std::optional<Eigen::Vector3d> uav_start_offset;
  // Sightlines for the visibility metric end this far above the actor.
  double visibility_target_height = 1.0;
  WorldConfig world;
  ActorConfig actor;
  LidarConfig lidar;
  planner::PlannerConfig planner;

  void Validate() const;
};

// Parses and serializes the JSON scenario schema. Unknown keys are errors;
// missing keys keep their defaults.
ScenarioConfig ScenarioFromJson(const std::string& text);
std::string ScenarioToJson(const ScenarioConfig& config);

// Piecewise-linear actor motion at constant speed. Past the end the actor
// stands still at the last vertex; before t = 0 it approaches along the
// line of the first segment.
class ActorScript {
 public:
  ActorScript(std::vector<Eigen::Vector2d> path, double speed);
  static ActorScript FromConfig(const ActorConfig& config,
                                const WorldConfig& world, double duration,
                                std::uint64_t seed);

  // Ground pose at time t; z from `terrain`.
  Pose At(double t, const mapping::HeightMap& terrain) const;
  const std::vector<Eigen::Vector2d>& path() const { return path_; }
  double speed() const { return speed_; }

 private:
  std::vector<Eigen::Vector2d> path_;
  std::vector<double> arc_;  // cumulative length at each vertex
  double speed_;
};

// One flown metric sample.
struct FlightSample {
  double time = 0.0;
  WorldPoint uav = WorldPoint::Zero();
  WorldPoint actor = WorldPoint::Zero();  // ground position
  double actor_heading = 0.0;
  bool visible = false;
  double shot_distance = 0.0;    // distance to the desired shot position
  double signed_distance = 0.0;  // ground-truth clearance at the UAV
};

struct CycleRecord {
  double time = 0.0;
  costs::CostReport report;
  costs::CostReport initial_report;
  int iterations = 0;
  planner::StopReason stop_reason = planner::StopReason::kIterationLimit;
  double wall_time_ms = 0.0;
  Waypoints waypoints;
  std::vector<double> headings;
  std::vector<Pose> forecast;
  std::uint64_t map_version = 0;
};

struct RunMetrics {
  double visibility = 0.0;
  double mean_shot_distance = 0.0;
  double mean_normalized_cost = 0.0;
  std::vector<double> normalized_cost;  // per cycle
  std::vector<double> cycle_wall_ms;    // per cycle
  bool collision = false;
  int samples = 0;
};

struct Trace {
  std::vector<CycleRecord> cycles;
  std::vector<FlightSample> samples;
};

// Metrics from a trace: visibility = visible samples / samples, mean shot
// distance over samples, cost and wall time per cycle, collision when any
// sample has negative clearance.
RunMetrics ComputeMetrics(const Trace& trace);

// Steppable closed loop: actor script, optional online mapping, planning
// cycles every replan_period, and the UAV flying each plan until the next.
// The tracker receives measurements from t = -replan_period on, so the
// first forecast already carries the actor's velocity.
class Simulation {
 public:
  explicit Simulation(const ScenarioConfig& config);

  // Runs whole planning cycles until `duration` more seconds have elapsed.
  // `duration` must be a whole number of replan periods.
  void Advance(double duration);

  // Shot used from the next cycle on.
  void SetShot(const ShotParams& shot) { config_.planner.shot = shot; }

  double time() const { return cycle_ * config_.replan_period; }
  const World& world() const { return *world_; }
  const ActorScript& actor() const { return actor_; }
  const Trace& trace() const { return trace_; }
  const ScenarioConfig& config() const { return config_; }
  const BoundaryCondition& uav() const { return uav_; }

 private:
  void RunCycle();

  ScenarioConfig config_;
  std::unique_ptr<World> world_;
  ActorScript actor_;
  std::vector<Eigen::Vector3d> lidar_pattern_;
  std::unique_ptr<mapping::MapStore> map_;
  forecast::ActorTracker tracker_;
  std::optional<planner::PlanResult> prev_;
  BoundaryCondition uav_;
  double uav_heading_ = 0.0;
  std::int64_t cycle_ = 0;
  std::int64_t next_measurement_ = 0;
  std::int64_t next_sample_ = 0;
  std::uint64_t noise_seed_;
  Trace trace_;
};

// Runs the whole scenario. A planner error aborts the run; the trace up to
// the failing cycle is kept in `trace` and the error is rethrown.
RunMetrics RunScenario(const ScenarioConfig& config, Trace* trace = nullptr);

// Per-cycle CSV (time, costs, iterations, stop reason) without timing, and
// the timing CSV kept apart so the main outputs stay reproducible.
void WriteCycleCsv(std::ostream& out, const Trace& trace);
void WriteTimingCsv(std::ostream& out, const Trace& trace);
// Trace as JSON: cycles with waypoints, headings, forecast and cost terms,
// and the flown samples. Timing fields are omitted.
std::string TraceToJson(const Trace& trace);
std::string MetricsToJson(const RunMetrics& metrics, bool include_timing);

}  // namespace sim
}  // namespace skyframe

#endif  // SKYFRAME_SIM_SCENARIO_H_
