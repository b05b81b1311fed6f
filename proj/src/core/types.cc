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

#include "skyframe/core/types.h"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace skyframe {

double NormalizeAngle(double radians) {
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  double wrapped = std::fmod(radians, kTwoPi);
  if (wrapped <= -std::numbers::pi) wrapped += kTwoPi;
  if (wrapped > std::numbers::pi) wrapped -= kTwoPi;
  return wrapped;
}

double WrapTwoPi(double radians) {
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  double wrapped = std::fmod(radians, kTwoPi);
  if (wrapped < 0.0) wrapped += kTwoPi;
  if (wrapped >= kTwoPi) wrapped = 0.0;
  return wrapped;
}

bool AllFinite(const WorldPoint& p) { return p.allFinite(); }

TimeGrid::TimeGrid(double horizon, int waypoint_count)
    : horizon_(horizon), n_(waypoint_count) {
  if (!(horizon > 0.0) || !std::isfinite(horizon)) {
    throw InvalidArgument("TimeGrid: horizon must be positive");
  }
  if (waypoint_count < 3) {
    throw InvalidArgument("TimeGrid: need at least 3 samples, got " +
                          std::to_string(waypoint_count));
  }
}

TimeGrid TimeGrid::WithStep(double horizon, double nominal_step) {
  if (!(nominal_step > 0.0)) {
    throw InvalidArgument("TimeGrid: step must be positive");
  }
  const int intervals =
      std::max(2, static_cast<int>(std::lround(horizon / nominal_step)));
  return TimeGrid(horizon, intervals + 1);
}

Trajectory::Trajectory(const TimeGrid& time_grid, Waypoints points)
    : grid(time_grid), waypoints(std::move(points)) {
  if (waypoints.rows() != grid.optimized_count()) {
    throw InvalidArgument(
        "Trajectory: expected " + std::to_string(grid.optimized_count()) +
        " waypoints, got " + std::to_string(waypoints.rows()));
  }
  if (!waypoints.allFinite()) {
    throw InvalidArgument("Trajectory: non-finite waypoint");
  }
}

ShotParams::ShotParams(double rho_in, double psi_rel_in, double theta_rel_in)
    : rho(rho_in), psi_rel(WrapTwoPi(psi_rel_in)), theta_rel(theta_rel_in) {
  if (!(rho > 0.0) || !std::isfinite(rho)) {
    throw InvalidArgument("ShotParams: rho must be positive");
  }
  if (!(theta_rel >= 0.0 && theta_rel <= std::numbers::pi)) {
    throw InvalidArgument("ShotParams: theta_rel must be in [0, pi]");
  }
}

void CostWeights::Validate() const {
  if (!(obstacle >= 0.0) || !(occlusion >= 0.0) || !(shot >= 0.0)) {
    throw InvalidArgument("CostWeights: weights must be nonnegative");
  }
}

ActorForecast::ActorForecast(double start, const TimeGrid& time_grid,
                             std::vector<Pose> samples)
    : start_time(start), grid(time_grid), poses(std::move(samples)) {
  if (static_cast<int>(poses.size()) != grid.sample_count()) {
    throw InvalidArgument("ActorForecast: expected " +
                          std::to_string(grid.sample_count()) + " poses, got " +
                          std::to_string(poses.size()));
  }
  for (Pose& pose : poses) pose.heading = NormalizeAngle(pose.heading);
}

}  // namespace skyframe
