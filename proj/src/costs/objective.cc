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

#include "skyframe/costs/objective.h"

#include <cmath>

namespace skyframe {
namespace costs {
namespace {

void CheckFinite(const std::string& term, double value,
                 const Waypoints& gradient) {
  if (!std::isfinite(value) || !gradient.allFinite()) {
    throw NonFiniteCost(term);
  }
}

}  // namespace

Objective::Objective(const TimeGrid& grid, const BoundaryCondition& bc,
                     const ActorForecast& actor, const ShotParams& shot,
                     const CostWeights& weights,
                     const mapping::DistanceView& view,
                     const ObjectiveOptions& options)
    : ops_(DiffOperators::Build(grid, bc)),
      actor_(actor),
      weights_(weights),
      view_(&view),
      options_(options),
      shot_path_(ShotPath(actor, shot)),
      smooth_(SmoothnessCost(ops_, options.derivative_weights)),
      shot_(ShotQualityCost(shot_path_)) {
  weights_.Validate();
  if (!(shot_path_.grid == grid)) {
    throw InvalidArgument("Objective: actor forecast grid differs from plan");
  }
}

CostReport Objective::Evaluate(const Trajectory& traj) const {
  if (!(traj.grid == ops_.grid())) {
    throw InvalidArgument("Objective: trajectory grid differs from plan");
  }
  const Waypoints& x = traj.waypoints;
  CostReport report;

  report.smoothness = smooth_.Value(x);
  Waypoints grad = smooth_.Gradient(x);
  CheckFinite("smoothness", report.smoothness, grad);

  report.shot = shot_.Value(x);
  const Waypoints shot_grad = shot_.Gradient(x);
  CheckFinite("shot", report.shot, shot_grad);
  grad += weights_.shot * shot_grad;

  if (weights_.obstacle != 0.0) {
    const TermResult r =
        Safety(traj, ops_.boundary(), *view_, options_.obstacle_epsilon);
    CheckFinite("obstacle", r.value, r.gradient);
    report.obstacle = r.value;
    grad += weights_.obstacle * r.gradient;
  }
  if (weights_.occlusion != 0.0) {
    const TermResult r =
        Occlusion(traj, ops_.boundary(), actor_, *view_, options_.occlusion);
    CheckFinite("occlusion", r.value, r.gradient);
    report.occlusion = r.value;
    grad += weights_.occlusion * r.gradient;
  }

  report.total = report.smoothness + weights_.obstacle * report.obstacle +
                 weights_.occlusion * report.occlusion +
                 weights_.shot * report.shot;
  report.gradient = std::move(grad);
  return report;
}

Eigen::MatrixXd Objective::Metric() const {
  return (smooth_.A + weights_.shot * shot_.A) / smooth_.intervals;
}

}  // namespace costs
}  // namespace skyframe
