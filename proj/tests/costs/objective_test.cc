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
#include <limits>
#include <numbers>
#include <random>

#include "gtest/gtest.h"
#include "support/finite_difference.h"
#include "support/worlds.h"

namespace skyframe {
namespace costs {
namespace {

constexpr double kPi = std::numbers::pi;

ActorForecast WalkingActor(const TimeGrid& grid, const WorldPoint& start,
                           const Eigen::Vector3d& velocity) {
  std::vector<Pose> poses;
  for (int i = 0; i < grid.sample_count(); ++i) {
    poses.push_back({start + velocity * grid.TimeAt(i),
                     std::atan2(velocity.y(), velocity.x())});
  }
  return ActorForecast(0.0, grid, poses);
}

TEST(ObjectiveTest, EmptyMapOnShotPathIsSmoothnessOnly) {
  auto world = std::make_unique<testing::TestWorld>(
      mapping::GridGeometry(WorldPoint::Zero(), 1.0,
                            mapping::VoxelIndex(20, 20, 20)),
      5.0);
  world->Finish();
  const TimeGrid grid(10.0, 21);
  const ActorForecast actor =
      WalkingActor(grid, WorldPoint(3, 3, 1), Eigen::Vector3d(0.5, 0.8, 0));
  const ShotParams shot(5.0, kPi, kPi / 3);
  BoundaryCondition bc;
  bc.p0 = actor.poses[0].position + ShotOffset(actor.poses[0].heading, shot);
  const Objective objective(grid, bc, actor, shot, CostWeights{}, *world->view);
  const CostReport r = objective.Evaluate(objective.shot_path());
  EXPECT_EQ(r.obstacle, 0.0);
  EXPECT_EQ(r.occlusion, 0.0);
  EXPECT_NEAR(r.shot, 0.0, 1e-12);
  EXPECT_NEAR(r.total, r.smoothness, 1e-12);
}

TEST(ObjectiveTest, ZeroWeightsLeaveSmoothness) {
  auto world = testing::RandomBoxWorld(9, 14);
  const TimeGrid grid(10.0, 21);
  const ActorForecast actor =
      WalkingActor(grid, WorldPoint(5, 5, 2), Eigen::Vector3d(1.5, 1.0, 0));
  CostWeights weights;
  weights.obstacle = weights.occlusion = weights.shot = 0.0;
  const Objective objective(grid, {}, actor, ShotParams{}, weights,
                            *world->view);
  const Trajectory traj = objective.shot_path();
  const CostReport r = objective.Evaluate(traj);
  EXPECT_DOUBLE_EQ(r.total, r.smoothness);
  EXPECT_LT(
      (r.gradient - objective.smoothness().Gradient(traj.waypoints)).norm(),
      1e-12);
}

TEST(ObjectiveTest, TotalEqualsHandSummedTerms) {
  std::mt19937 rng(77);
  std::uniform_real_distribution<double> u(0.1, 3.0);
  std::normal_distribution<double> noise(0.0, 1.5);
  for (int trial = 0; trial < 20; ++trial) {
    auto world = testing::RandomBoxWorld(300 + trial, 12);
    const TimeGrid grid(10.0, 21);
    const ActorForecast actor = WalkingActor(
        grid, WorldPoint(6, 6 + trial % 5, 3), Eigen::Vector3d(1.2, 0.9, 0));
    CostWeights w;
    w.obstacle = u(rng);
    w.occlusion = u(rng);
    w.shot = u(rng);
    ObjectiveOptions options;
    options.occlusion.target_height = 1.0;
    BoundaryCondition bc;
    bc.p0 = WorldPoint(10, 4, 8);
    bc.v0 = Eigen::Vector3d(1, 0.5, 0);
    const ShotParams shot(6.0, kPi, kPi / 3);
    const Objective objective(grid, bc, actor, shot, w, *world->view, options);
    Waypoints x = objective.shot_path().waypoints;
    for (int i = 0; i < x.rows(); ++i) {
      x.row(i) += Eigen::RowVector3d(noise(rng), noise(rng), noise(rng));
    }
    const Trajectory traj(grid, x);
    const CostReport r = objective.Evaluate(traj);

    const DiffOperators ops = DiffOperators::Build(grid, bc);
    const QuadraticCost smooth = SmoothnessCost(ops);
    const QuadraticCost shot_q = ShotQualityCost(ShotPath(actor, shot));
    const TermResult obs =
        Safety(traj, bc, *world->view, options.obstacle_epsilon);
    const TermResult occ =
        Occlusion(traj, bc, actor, *world->view, options.occlusion);
    const double total = smooth.Value(x) + w.obstacle * obs.value +
                         w.occlusion * occ.value + w.shot * shot_q.Value(x);
    EXPECT_NEAR(r.total, total, 1e-12 * std::max(1.0, std::abs(total)));
    const Waypoints grad = smooth.Gradient(x) + w.obstacle * obs.gradient +
                           w.occlusion * occ.gradient +
                           w.shot * shot_q.Gradient(x);
    EXPECT_LT((r.gradient - grad).norm(), 1e-12 * std::max(1.0, grad.norm()));
  }
}

TEST(ObjectiveTest, MetricIsQuadraticHessian) {
  auto world = testing::RandomBoxWorld(5);
  const TimeGrid grid(10.0, 31);
  const ActorForecast actor =
      WalkingActor(grid, WorldPoint(5, 5, 2), Eigen::Vector3d(1, 0, 0));
  CostWeights w;
  w.shot = 2.5;
  const Objective objective(grid, {}, actor, ShotParams{}, w, *world->view);
  const Eigen::MatrixXd expected =
      objective.smoothness().Hessian() + 2.5 * objective.shot().Hessian();
  EXPECT_LT((objective.Metric() - expected).norm(), 1e-12);
}

TEST(ObjectiveTest, NonFiniteTermIsNamed) {
  auto world = testing::RandomBoxWorld(5);
  const TimeGrid grid(10.0, 11);
  const ActorForecast actor =
      WalkingActor(grid, WorldPoint(5, 5, 2), Eigen::Vector3d(1, 0, 0));
  const Objective objective(grid, {}, actor, ShotParams{}, CostWeights{},
                            *world->view);
  Waypoints x = objective.shot_path().waypoints;
  // Trajectory rejects non-finite input, so corrupt after construction.
  Trajectory traj(grid, x);
  traj.waypoints(3, 1) = std::numeric_limits<double>::infinity();
  try {
    objective.Evaluate(traj);
    FAIL() << "expected NonFiniteCost";
  } catch (const NonFiniteCost& e) {
    EXPECT_EQ(e.term(), "smoothness");
  }
}

TEST(ObjectiveTest, RejectsMismatchedGrid) {
  auto world = testing::RandomBoxWorld(5);
  const TimeGrid grid(10.0, 11);
  const ActorForecast actor =
      WalkingActor(grid, WorldPoint(5, 5, 2), Eigen::Vector3d(1, 0, 0));
  const Objective objective(grid, {}, actor, ShotParams{}, CostWeights{},
                            *world->view);
  EXPECT_THROW(objective.Evaluate(
                   Trajectory(TimeGrid(10.0, 12), Waypoints::Zero(11, 3))),
               InvalidArgument);
  EXPECT_THROW(Objective(TimeGrid(10.0, 12), {}, actor, ShotParams{},
                         CostWeights{}, *world->view),
               InvalidArgument);
}

}  // namespace
}  // namespace costs
}  // namespace skyframe
