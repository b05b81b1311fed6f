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

#include "skyframe/core/diff_operators.h"

#include <cmath>

namespace skyframe {

int DiffOperators::Slot(int order) {
  if (order < 1 || order > 3) {
    throw InvalidArgument("DiffOperators: derivative order must be 1..3");
  }
  return order - 1;
}

DiffOperators DiffOperators::Build(const TimeGrid& grid,
                                   const BoundaryCondition& bc) {
  if (!bc.p0.allFinite() || !bc.v0.allFinite() || !bc.a0.allFinite()) {
    throw InvalidArgument("DiffOperators: non-finite boundary condition");
  }
  const int m = grid.optimized_count();
  const double dt = grid.step();

  Eigen::MatrixXd k = Eigen::MatrixXd::Identity(m, m);
  for (int i = 1; i < m; ++i) k(i, i - 1) = -1.0;

  // e, e_dot and e_ddot only touch the first row.
  Waypoints e = Waypoints::Zero(m, 3);
  Waypoints e_dot = Waypoints::Zero(m, 3);
  Waypoints e_ddot = Waypoints::Zero(m, 3);
  e.row(0) = -bc.p0.transpose();
  e_dot.row(0) = -(bc.v0 * dt).transpose();
  e_ddot.row(0) = -(bc.a0 * dt * dt).transpose();

  const Eigen::MatrixXd k2 = k * k;
  const Eigen::MatrixXd k3 = k2 * k;

  DiffOperators ops(grid, bc);
  ops.k_[0] = k / dt;
  ops.k_[1] = k2 / (dt * dt);
  ops.k_[2] = k3 / (dt * dt * dt);
  ops.e_[0] = e / dt;
  ops.e_[1] = (k * e + e_dot) / (dt * dt);
  ops.e_[2] = (k2 * e + k * e_dot + e_ddot) / (dt * dt * dt);
  for (int d = 0; d < 3; ++d) {
    ops.a_[d] = ops.k_[d].transpose() * ops.k_[d];
    ops.b_[d] = ops.k_[d].transpose() * ops.e_[d];
    ops.c_[d] = ops.e_[d].transpose() * ops.e_[d];
  }
  return ops;
}

Waypoints DiffOperators::Derivative(int order, const Waypoints& points) const {
  if (points.rows() != grid_.optimized_count()) {
    throw InvalidArgument("DiffOperators: waypoint count mismatch");
  }
  return K(order) * points + e(order);
}

Eigen::MatrixXd DiffOperators::SmoothA(const DerivativeWeights& w) const {
  return w[0] * a_[0] + w[1] * a_[1] + w[2] * a_[2];
}

Waypoints DiffOperators::SmoothB(const DerivativeWeights& w) const {
  return w[0] * b_[0] + w[1] * b_[1] + w[2] * b_[2];
}

Eigen::Matrix3d DiffOperators::SmoothC(const DerivativeWeights& w) const {
  return w[0] * c_[0] + w[1] * c_[1] + w[2] * c_[2];
}

std::vector<double> HeadingsToActor(const Trajectory& uav,
                                    const ActorForecast& actor,
                                    double initial_heading) {
  if (actor.grid.sample_count() < uav.grid.sample_count() ||
      std::abs(actor.grid.step() - uav.grid.step()) > 1e-9) {
    throw InvalidArgument("HeadingsToActor: forecast does not cover the plan");
  }
  std::vector<double> headings;
  headings.reserve(uav.size());
  double previous = NormalizeAngle(initial_heading);
  for (int i = 0; i < uav.size(); ++i) {
    const WorldPoint& a = actor.poses[i + 1].position;
    const double dx = a.x() - uav.waypoints(i, 0);
    const double dy = a.y() - uav.waypoints(i, 1);
    if (std::hypot(dx, dy) > 1e-9)
      previous = NormalizeAngle(std::atan2(dy, dx));
    headings.push_back(previous);
  }
  return headings;
}

}  // namespace skyframe
