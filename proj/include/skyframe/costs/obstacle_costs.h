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

#ifndef SKYFRAME_COSTS_OBSTACLE_COSTS_H_
#define SKYFRAME_COSTS_OBSTACLE_COSTS_H_

#include "skyframe/core/types.h"
#include "skyframe/costs/quadratic_cost.h"
#include "skyframe/mapping/signed_distance_field.h"

namespace skyframe {
namespace costs {

inline constexpr double kDefaultObstacleEpsilon = 2.5;

struct PointCost {
  double value = 0.0;
  double derivative = 0.0;  // dc/dd
};

// Penalty on a signed distance d:
//   d < 0:       -d + eps/2
//   0 <= d <= eps: (d - eps)^2 / (2 eps)
//   d > eps:     0
// Throws unless eps > 0.
PointCost ObstaclePointCost(double d, double eps);

// Arc-length weighted obstacle penalty along the trajectory,
//   (1 / (n - 1)) * sum_i w_i c(d(p_i)) |v_i|,
// with backward-difference velocities v_i = (p_i - p_{i-1}) / dt, the start
// sample p_0 using the boundary velocity, and trapezoid weights (1/2 at both
// ends). The gradient is the exact gradient of this sum.
TermResult Safety(const Trajectory& traj, const BoundaryCondition& bc,
                  const mapping::DistanceView& view, double eps);

// The continuous-limit functional gradient |v| [(I - v̂v̂ᵀ) ∇c - c κ] with
// κ = (I - v̂v̂ᵀ) a / |v|^2, scaled by 1 / (n - 1) so it is comparable with
// Safety(). Provided for reference; the optimizer uses Safety().
Waypoints SafetyFunctionalGradient(const Trajectory& traj,
                                   const BoundaryCondition& bc,
                                   const mapping::DistanceView& view,
                                   double eps);

struct OcclusionOptions {
  double eps = kDefaultObstacleEpsilon;
  // Sightlines end this far above the forecast actor position.
  double target_height = 0.0;
  int min_samples = 8;
};

// Obstacle penalty integrated over the camera-to-actor sightlines,
//   (1 / (n - 1)) * sum_i w_i I_i |v_i|,  I_i = (|L_i| / N_i) sum_k c(p_ik),
// where L_i = a_i - q_i, p_ik = q_i + tau_k L_i at midpoints
// tau_k = (k + 1/2) / N_i and N_i = max(min_samples, ceil(|L_i| / voxel)).
// Waypoint i is paired with forecast sample i + 1. Exact gradient.
TermResult Occlusion(const Trajectory& traj, const BoundaryCondition& bc,
                     const ActorForecast& actor,
                     const mapping::DistanceView& view,
                     const OcclusionOptions& options);

}  // namespace costs
}  // namespace skyframe

#endif  // SKYFRAME_COSTS_OBSTACLE_COSTS_H_
