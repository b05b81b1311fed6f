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

#ifndef SKYFRAME_CORE_TYPES_H_
#define SKYFRAME_CORE_TYPES_H_

#include <stdexcept>
#include <string>
#include <vector>

#include "Eigen/Core"

namespace skyframe {

// Position in the fixed world frame, meters. z is up.
using WorldPoint = Eigen::Vector3d;

// One row per optimized waypoint p_1 ... p_{n-1}; columns are x, y, z.
using Waypoints = Eigen::Matrix<double, Eigen::Dynamic, 3>;

class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Wraps an angle into (-pi, pi].
double NormalizeAngle(double radians);

// Wraps an angle into [0, 2*pi).
double WrapTwoPi(double radians);

bool AllFinite(const WorldPoint& p);

struct Pose {
  WorldPoint position = WorldPoint::Zero();
  double heading = 0.0;  // (-pi, pi]
};

// Uniform discretization of the planning horizon. Sample i lives at
// i * step() for i = 0 ... n - 1; sample 0 is the fixed start point, the
// remaining n - 1 samples are the optimized waypoints.
class TimeGrid {
 public:
  // Throws InvalidArgument unless horizon > 0 and waypoint_count >= 3.
  TimeGrid(double horizon, int waypoint_count);

  // Grid whose step stays close to `nominal_step` for an arbitrary horizon.
  static TimeGrid WithStep(double horizon, double nominal_step);

  double horizon() const { return horizon_; }
  int sample_count() const { return n_; }
  int optimized_count() const { return n_ - 1; }
  double step() const { return horizon_ / (n_ - 1); }
  double TimeAt(int sample) const { return sample * step(); }

  bool operator==(const TimeGrid& other) const {
    return horizon_ == other.horizon_ && n_ == other.n_;
  }

 private:
  double horizon_;
  int n_;
};

struct Trajectory {
  Trajectory(const TimeGrid& time_grid, Waypoints points);

  // Row i is the waypoint at time (i + 1) * step.
  WorldPoint Waypoint(int i) const { return waypoints.row(i).transpose(); }
  int size() const { return static_cast<int>(waypoints.rows()); }

  TimeGrid grid;
  Waypoints waypoints;
};

struct BoundaryCondition {
  WorldPoint p0 = WorldPoint::Zero();
  Eigen::Vector3d v0 = Eigen::Vector3d::Zero();
  Eigen::Vector3d a0 = Eigen::Vector3d::Zero();
};

// Artistic shot: distance to the actor, yaw relative to the actor heading
// and tilt measured from the vertical (pi/2 is level with the actor).
struct ShotParams {
  ShotParams() = default;
  ShotParams(double rho, double psi_rel, double theta_rel);

  double rho = 10.0;
  double psi_rel = 3.14159265358979323846;
  double theta_rel = 1.0471975511965976;  // 60 degrees from vertical
};

// Weights of the obstacle, occlusion and shot terms. Smoothness has weight 1.
struct CostWeights {
  double obstacle = 1.0;
  double occlusion = 1.0;
  double shot = 1.0;

  void Validate() const;
};

// Predicted actor poses sampled on a planning TimeGrid starting at
// `start_time`; poses[0] is the current filtered pose.
struct ActorForecast {
  ActorForecast(double start, const TimeGrid& time_grid,
                std::vector<Pose> samples);

  double start_time;
  TimeGrid grid;
  std::vector<Pose> poses;
};

}  // namespace skyframe

#endif  // SKYFRAME_CORE_TYPES_H_
