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

#ifndef SKYFRAME_CORE_DIFF_OPERATORS_H_
#define SKYFRAME_CORE_DIFF_OPERATORS_H_

#include <array>
#include <vector>

#include "Eigen/Core"
#include "skyframe/core/types.h"

namespace skyframe {

// Weights of the first, second and third derivative in the smoothness cost.
using DerivativeWeights = std::array<double, 3>;
inline constexpr DerivativeWeights kUnitDerivativeWeights = {1.0, 1.0, 1.0};

// Backward finite-difference operators over the optimized waypoints.
//
// For derivative order d in {1, 2, 3}, the d-th derivative of the waypoint
// matrix X is K(d) * X + e(d). K(1) = K / dt with K lower bidiagonal (+1 on
// the diagonal, -1 below); higher orders are powers of K. The e(d) terms fold
// in the boundary position, velocity and acceleration so that the first rows
// difference against p0, v0 and a0.
class DiffOperators {
 public:
  static DiffOperators Build(const TimeGrid& grid, const BoundaryCondition& bc);

  const TimeGrid& grid() const { return grid_; }
  const BoundaryCondition& boundary() const { return bc_; }

  // order is 1, 2 or 3.
  const Eigen::MatrixXd& K(int order) const { return k_[Slot(order)]; }
  const Waypoints& e(int order) const { return e_[Slot(order)]; }
  const Eigen::MatrixXd& A(int order) const { return a_[Slot(order)]; }
  const Waypoints& b(int order) const { return b_[Slot(order)]; }
  const Eigen::Matrix3d& c(int order) const { return c_[Slot(order)]; }

  // K(order) * points + e(order).
  Waypoints Derivative(int order, const Waypoints& points) const;

  // sum_d w_d A(d), and likewise for b and c.
  Eigen::MatrixXd SmoothA(const DerivativeWeights& w) const;
  Waypoints SmoothB(const DerivativeWeights& w) const;
  Eigen::Matrix3d SmoothC(const DerivativeWeights& w) const;

 private:
  DiffOperators(const TimeGrid& grid, const BoundaryCondition& bc)
      : grid_(grid), bc_(bc) {}
  static int Slot(int order);

  TimeGrid grid_;
  BoundaryCondition bc_;
  std::array<Eigen::MatrixXd, 3> k_;
  std::array<Waypoints, 3> e_;
  std::array<Eigen::MatrixXd, 3> a_;
  std::array<Waypoints, 3> b_;
  std::array<Eigen::Matrix3d, 3> c_;
};

// Camera yaw for each optimized waypoint so the UAV faces the actor sample
// taken at the same time. When UAV and actor coincide horizontally the
// previous heading is held; `initial_heading` seeds that rule for the first
// waypoint.
std::vector<double> HeadingsToActor(const Trajectory& uav,
                                    const ActorForecast& actor,
                                    double initial_heading = 0.0);

}  // namespace skyframe

#endif  // SKYFRAME_CORE_DIFF_OPERATORS_H_
