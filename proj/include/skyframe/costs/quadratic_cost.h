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

#ifndef SKYFRAME_COSTS_QUADRATIC_COST_H_
#define SKYFRAME_COSTS_QUADRATIC_COST_H_

#include "Eigen/Core"
#include "skyframe/core/diff_operators.h"
#include "skyframe/core/types.h"

namespace skyframe {
namespace costs {

// J(X) = Tr(Xᵀ A X + 2 Xᵀ b + c) / (2 (n - 1)) over the waypoint matrix X.
struct QuadraticCost {
  Eigen::MatrixXd A;
  Waypoints b;
  Eigen::Matrix3d c = Eigen::Matrix3d::Zero();
  int intervals = 1;  // n - 1

  double Value(const Waypoints& x) const;
  Waypoints Gradient(const Waypoints& x) const;
  Eigen::MatrixXd Hessian() const;
};

// Value and gradient of one cost term.
struct TermResult {
  double value = 0.0;
  Waypoints gradient;
};

// Sum of squared first, second and third derivatives.
QuadraticCost SmoothnessCost(
    const DiffOperators& ops,
    const DerivativeWeights& weights = kUnitDerivativeWeights);

// Desired camera positions: the actor forecast offset by the spherical shot
// vector rho [cos(psi_a + psi_rel) sin(theta), sin(psi_a + psi_rel) sin(theta),
// cos(theta)]. Row i corresponds to forecast sample i + 1, matching the
// optimized waypoints.
Trajectory ShotPath(const ActorForecast& actor, const ShotParams& shot);

// Offset of one shot sample from the actor pose.
Eigen::Vector3d ShotOffset(double actor_heading, const ShotParams& shot);

// Half the mean squared distance to the shot path: K = -I, e = shot path.
QuadraticCost ShotQualityCost(const Trajectory& shot_path);

}  // namespace costs
}  // namespace skyframe

#endif  // SKYFRAME_COSTS_QUADRATIC_COST_H_
