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

#include "skyframe/costs/quadratic_cost.h"

#include <cmath>

namespace skyframe {
namespace costs {
namespace {

void CheckRows(const QuadraticCost& q, const Waypoints& x) {
  if (x.rows() != q.A.rows()) {
    throw InvalidArgument("QuadraticCost: expected " +
                          std::to_string(q.A.rows()) + " waypoints, got " +
                          std::to_string(x.rows()));
  }
}

}  // namespace

double QuadraticCost::Value(const Waypoints& x) const {
  CheckRows(*this, x);
  const double quad = (x.transpose() * A * x).trace();
  const double lin = 2.0 * (x.transpose() * b).trace();
  return 0.5 * (quad + lin + c.trace()) / intervals;
}

Waypoints QuadraticCost::Gradient(const Waypoints& x) const {
  CheckRows(*this, x);
  return (A * x + b) / intervals;
}

Eigen::MatrixXd QuadraticCost::Hessian() const { return A / intervals; }

QuadraticCost SmoothnessCost(const DiffOperators& ops,
                             const DerivativeWeights& weights) {
  for (double w : weights) {
    if (!(w >= 0.0)) {
      throw InvalidArgument("SmoothnessCost: derivative weights must be >= 0");
    }
  }
  QuadraticCost q;
  q.A = ops.SmoothA(weights);
  q.b = ops.SmoothB(weights);
  q.c = ops.SmoothC(weights);
  q.intervals = ops.grid().optimized_count();
  return q;
}

Eigen::Vector3d ShotOffset(double actor_heading, const ShotParams& shot) {
  const double yaw = actor_heading + shot.psi_rel;
  const double s = std::sin(shot.theta_rel);
  return shot.rho * Eigen::Vector3d(std::cos(yaw) * s, std::sin(yaw) * s,
                                    std::cos(shot.theta_rel));
}

Trajectory ShotPath(const ActorForecast& actor, const ShotParams& shot) {
  const int m = actor.grid.optimized_count();
  Waypoints points(m, 3);
  for (int i = 0; i < m; ++i) {
    const Pose& pose = actor.poses[i + 1];
    points.row(i) =
        (pose.position + ShotOffset(pose.heading, shot)).transpose();
  }
  return Trajectory(actor.grid, std::move(points));
}

QuadraticCost ShotQualityCost(const Trajectory& shot_path) {
  const int m = shot_path.size();
  QuadraticCost q;
  q.A = Eigen::MatrixXd::Identity(m, m);
  q.b = -shot_path.waypoints;
  q.c = shot_path.waypoints.transpose() * shot_path.waypoints;
  q.intervals = m;
  return q;
}

}  // namespace costs
}  // namespace skyframe
