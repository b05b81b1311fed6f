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

#ifndef SKYFRAME_COSTS_OBJECTIVE_H_
#define SKYFRAME_COSTS_OBJECTIVE_H_

#include <stdexcept>
#include <string>

#include "Eigen/Core"
#include "skyframe/core/diff_operators.h"
#include "skyframe/core/types.h"
#include "skyframe/costs/obstacle_costs.h"
#include "skyframe/costs/quadratic_cost.h"
#include "skyframe/mapping/signed_distance_field.h"

namespace skyframe {
namespace costs {

// Thrown when a term evaluates to NaN or infinity. `term()` names it.
class NonFiniteCost : public std::runtime_error {
 public:
  explicit NonFiniteCost(const std::string& term)
      : std::runtime_error("non-finite value in cost term '" + term + "'"),
        term_(term) {}
  const std::string& term() const { return term_; }

 private:
  std::string term_;
};

struct CostReport {
  double total = 0.0;
  double smoothness = 0.0;
  double obstacle = 0.0;
  double occlusion = 0.0;
  double shot = 0.0;
  Waypoints gradient;
};

struct ObjectiveOptions {
  DerivativeWeights derivative_weights = kUnitDerivativeWeights;
  double obstacle_epsilon = kDefaultObstacleEpsilon;
  OcclusionOptions occlusion;
};

// J = J_smooth + λ1 J_obs + λ2 J_occ + λ3 J_shot for one planning problem.
// The quadratic terms are assembled once at construction.
class Objective {
 public:
  Objective(const TimeGrid& grid, const BoundaryCondition& bc,
            const ActorForecast& actor, const ShotParams& shot,
            const CostWeights& weights, const mapping::DistanceView& view,
            const ObjectiveOptions& options = {});

  // Throws NonFiniteCost when any term is not finite, and InvalidArgument
  // when the trajectory grid does not match.
  CostReport Evaluate(const Trajectory& traj) const;

  // Hessian of the quadratic part, (A_smooth + λ3 A_shot) / (n - 1).
  Eigen::MatrixXd Metric() const;

  const DiffOperators& ops() const { return ops_; }
  const QuadraticCost& smoothness() const { return smooth_; }
  const QuadraticCost& shot() const { return shot_; }
  const Trajectory& shot_path() const { return shot_path_; }
  const CostWeights& weights() const { return weights_; }

 private:
  DiffOperators ops_;
  ActorForecast actor_;
  CostWeights weights_;
  const mapping::DistanceView* view_;
  ObjectiveOptions options_;
  Trajectory shot_path_;
  QuadraticCost smooth_;
  QuadraticCost shot_;
};

}  // namespace costs
}  // namespace skyframe

#endif  // SKYFRAME_COSTS_OBJECTIVE_H_
