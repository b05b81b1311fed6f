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

#ifndef SKYFRAME_PLANNER_PLANNER_H_
#define SKYFRAME_PLANNER_PLANNER_H_

#include <span>
#include <string>
#include <vector>

#include "skyframe/core/types.h"
#include "skyframe/costs/objective.h"
#include "skyframe/forecast/forecast.h"
#include "skyframe/mapping/height_map.h"
#include "skyframe/mapping/signed_distance_field.h"

namespace skyframe {
namespace planner {

struct PlannerConfig {
  // Each iteration moves by (1 / eta) M^-1 grad J.
  double eta = 10.0;
  // Stop when grad^T M^-1 grad / 2 drops below eps0.
  double eps0 = 1e-6;
  // Stop when a step lowers the cost by a relative amount below eps1.
  double eps1 = 1e-5;
  int max_iterations = 50;
  CostWeights weights;
  ShotParams shot;
  costs::ObjectiveOptions objective;
  // Planning horizon and total sample count including the start sample.
  double horizon = 10.0;
  int samples = 51;

  TimeGrid grid() const { return TimeGrid(horizon, samples); }
  void Validate() const;
};

enum class StopReason { kCurvature, kRelativeDecrease, kIterationLimit };
std::string ToString(StopReason reason);

struct PlanResult {
  Trajectory trajectory;
  BoundaryCondition boundary;
  ActorForecast forecast;
  std::vector<double> headings;
  costs::CostReport report;          // best iterate
  costs::CostReport initial_report;  // initialization
  int iterations = 0;
  int factorizations = 0;
  StopReason stop_reason = StopReason::kIterationLimit;
  double wall_time_ms = 0.0;

  // Absolute time of the start sample, equal to forecast.start_time.
  double start_time() const { return forecast.start_time; }
};

// Covariant gradient descent from `init`. M = (A_smooth + λ3 A_shot)/(n - 1)
// is factored once; every iteration applies x <- x - (1/eta) M^-1 grad J.
// Returns the lowest-cost iterate seen, including `init`. Throws
// costs::NonFiniteCost when a term evaluates to NaN or infinity.
PlanResult Optimize(const Trajectory& init, const BoundaryCondition& bc,
                    const ActorForecast& actor,
                    const mapping::DistanceView& view,
                    const PlannerConfig& config, double initial_heading = 0.0);

// Position, velocity and acceleration along a plan at `t` seconds after its
// start, from the piecewise-linear path through p0 and the waypoints. Times
// past the horizon extend the final segment.
BoundaryCondition StateAt(const Trajectory& traj, const BoundaryCondition& bc,
                          double t);

// Initialization for the next cycle, `elapsed` seconds later on the same
// time grid. Samples still inside the previous horizon are interpolated
// along the previous plan. Later samples continue along the circle through
// the last three waypoints at their mean angular rate (a straight line when
// they are collinear or fewer than three exist).
Trajectory WarmStart(const PlanResult& prev, double elapsed);

// Everything a planning cycle reads from the world.
struct PlanWorld {
  const mapping::DistanceView* view = nullptr;
  const mapping::HeightMap* terrain = nullptr;
};

// One planning cycle at absolute time `now` with the UAV at `uav`:
// update the tracker, forecast the actor, initialize from `prev` (warm) or
// from the shot path (cold), optimize and assign headings.
PlanResult PlanCycle(forecast::ActorTracker* tracker,
                     std::span<const forecast::ActorMeasurement> measurements,
                     const PlanResult* prev, const BoundaryCondition& uav,
                     double uav_heading, double now, const PlanWorld& world,
                     const PlannerConfig& config);

}  // namespace planner
}  // namespace skyframe

#endif  // SKYFRAME_PLANNER_PLANNER_H_
