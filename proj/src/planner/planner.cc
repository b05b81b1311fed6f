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

#include "skyframe/planner/planner.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include "Eigen/Cholesky"
#include "Eigen/Geometry"
#include "skyframe/core/diff_operators.h"

namespace skyframe {
namespace planner {
namespace {

// Point on the polyline p0, w_0, ..., w_{m-1} at fractional sample index s
// (s = 0 is p0). Indices past the end extrapolate the last segment.
WorldPoint PolylineAt(const Trajectory& traj, const WorldPoint& p0, double s) {
  const int m = traj.size();
  auto point = [&](int k) { return k == 0 ? p0 : traj.Waypoint(k - 1); };
  if (m == 0) return p0;
  const int seg = std::clamp(static_cast<int>(std::floor(s)), 0, m - 1);
  const double f = s - seg;
  return point(seg) + f * (point(seg + 1) - point(seg));
}

// Continues the circle through a, b, c beyond c by `steps` multiples of the
// mean angular step. Returns false when the points are nearly collinear.
bool CircleContinue(const WorldPoint& a, const WorldPoint& b,
                    const WorldPoint& c, double steps, WorldPoint* out) {
  const Eigen::Vector3d ab = b - a;
  const Eigen::Vector3d ac = c - a;
  const Eigen::Vector3d n = ab.cross(ac);
  const double n2 = n.squaredNorm();
  const double scale = std::max(ab.squaredNorm(), ac.squaredNorm());
  if (n2 <= 1e-18 * scale * scale || scale == 0.0) return false;
  const WorldPoint center =
      a + (ac.squaredNorm() * n.cross(ab) + ab.squaredNorm() * ac.cross(n)) /
              (2.0 * n2);
  const Eigen::Vector3d axis = n / std::sqrt(n2);
  auto angle = [&](const Eigen::Vector3d& u, const Eigen::Vector3d& v) {
    return std::atan2(axis.dot(u.cross(v)), u.dot(v));
  };
  const double total =
      angle(a - center, b - center) + angle(b - center, c - center);
  const double step = 0.5 * total;
  *out = center + Eigen::AngleAxisd(step * steps, axis) * (c - center);
  return true;
}

}  // namespace

void PlannerConfig::Validate() const {
  if (!(eta > 0.0) || !(eps0 > 0.0) || !(eps1 > 0.0) || max_iterations < 1) {
    throw InvalidArgument(
        "PlannerConfig: need eta > 0, eps0 > 0, eps1 > 0, max_iterations >= 1");
  }
  weights.Validate();
  grid();
}

std::string ToString(StopReason reason) {
  switch (reason) {
    case StopReason::kCurvature:
      return "curvature";
    case StopReason::kRelativeDecrease:
      return "relative_decrease";
    case StopReason::kIterationLimit:
      return "iteration_limit";
  }
  return "unknown";
}

PlanResult Optimize(const Trajectory& init, const BoundaryCondition& bc,
                    const ActorForecast& actor,
                    const mapping::DistanceView& view,
                    const PlannerConfig& config, double initial_heading) {
  const auto started = std::chrono::steady_clock::now();
  config.Validate();
  const costs::Objective objective(init.grid, bc, actor, config.shot,
                                   config.weights, view, config.objective);
  const Eigen::LLT<Eigen::MatrixXd> metric(objective.Metric());
  if (metric.info() != Eigen::Success) {
    throw InvalidArgument(
        "Optimize: quadratic metric is not positive definite");
  }

  PlanResult result{
      init, bc, actor, {}, {}, {}, 0, 1, StopReason::kIterationLimit, 0.0};
  Waypoints x = init.waypoints;
  costs::CostReport current = objective.Evaluate(init);
  result.initial_report = current;
  result.report = current;

  for (int it = 1; it <= config.max_iterations; ++it) {
    result.iterations = it;
    const Waypoints direction = metric.solve(current.gradient);
    const double curvature =
        0.5 * current.gradient.cwiseProduct(direction).sum();
    if (curvature < config.eps0) {
      result.stop_reason = StopReason::kCurvature;
      break;
    }
    x -= direction / config.eta;
    costs::CostReport next = objective.Evaluate(Trajectory(init.grid, x));
    if (next.total < result.report.total) {
      result.report = next;
      result.trajectory.waypoints = x;
    }
    const double decrease =
        (current.total - next.total) / std::max(std::abs(current.total), 1e-12);
    current = std::move(next);
    // A step that raises the cost is not convergence; the iteration goes
    // on and the best iterate seen so far is returned.
    if (decrease >= 0.0 && decrease < config.eps1) {
      result.stop_reason = StopReason::kRelativeDecrease;
      break;
    }
  }

  result.headings = HeadingsToActor(result.trajectory, actor, initial_heading);
  result.wall_time_ms = std::chrono::duration<double, std::milli>(
                            std::chrono::steady_clock::now() - started)
                            .count();
  return result;
}

BoundaryCondition StateAt(const Trajectory& traj, const BoundaryCondition& bc,
                          double t) {
  const double dt = traj.grid.step();
  const double s = t / dt;
  BoundaryCondition out;
  out.p0 =
      s <= 0.0 ? WorldPoint(bc.p0 + bc.v0 * t) : PolylineAt(traj, bc.p0, s);
  auto segment_velocity = [&](int seg) -> Eigen::Vector3d {
    if (seg < 0) return bc.v0;
    const int m = traj.size();
    seg = std::min(seg, m - 1);
    const WorldPoint a = seg == 0 ? bc.p0 : traj.Waypoint(seg - 1);
    return (traj.Waypoint(seg) - a) / dt;
  };
  const int seg = static_cast<int>(std::floor(s));
  out.v0 = segment_velocity(seg);
  out.a0 = (segment_velocity(seg) - segment_velocity(seg - 1)) / dt;
  return out;
}

Trajectory WarmStart(const PlanResult& prev, double elapsed) {
  const Trajectory& traj = prev.trajectory;
  const TimeGrid& grid = traj.grid;
  if (!(elapsed >= 0.0) || elapsed >= grid.horizon()) {
    throw InvalidArgument("WarmStart: elapsed must lie in [0, horizon)");
  }
  const int m = traj.size();
  const double dt = grid.step();
  Waypoints out(m, 3);
  for (int i = 0; i < m; ++i) {
    const double s = (elapsed + (i + 1) * dt) / dt;  // sample index in prev
    if (s <= m) {
      out.row(i) = PolylineAt(traj, prev.boundary.p0, s).transpose();
      continue;
    }
    const double beyond = s - m;
    WorldPoint p;
    if (m >= 3 && CircleContinue(traj.Waypoint(m - 3), traj.Waypoint(m - 2),
                                 traj.Waypoint(m - 1), beyond, &p)) {
      out.row(i) = p.transpose();
    } else {
      out.row(i) = PolylineAt(traj, prev.boundary.p0, s).transpose();
    }
  }
  return Trajectory(grid, std::move(out));
}

PlanResult PlanCycle(forecast::ActorTracker* tracker,
                     std::span<const forecast::ActorMeasurement> measurements,
                     const PlanResult* prev, const BoundaryCondition& uav,
                     double uav_heading, double now, const PlanWorld& world,
                     const PlannerConfig& config) {
  if (tracker == nullptr || world.view == nullptr || world.terrain == nullptr) {
    throw InvalidArgument("PlanCycle: tracker and world must be set");
  }
  for (const auto& m : measurements) tracker->Update(m);
  const TimeGrid grid = config.grid();
  const ActorForecast actor = tracker->Forecast(grid, *world.terrain, now);

  std::optional<Trajectory> init;
  if (prev != nullptr && prev->trajectory.grid == grid) {
    const double elapsed = now - prev->start_time();
    if (elapsed >= 0.0 && elapsed < grid.horizon()) {
      init = WarmStart(*prev, elapsed);
    }
  }
  if (!init) init = costs::ShotPath(actor, config.shot);
  return Optimize(*init, uav, actor, *world.view, config, uav_heading);
}

}  // namespace planner
}  // namespace skyframe
