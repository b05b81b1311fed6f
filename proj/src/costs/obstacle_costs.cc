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

#include "skyframe/costs/obstacle_costs.h"

#include <algorithm>
#include <cmath>
#include <vector>

namespace skyframe {
namespace costs {
namespace {

constexpr double kStationary = 1e-9;

struct Velocities {
  std::vector<Eigen::Vector3d> v;  // per optimized waypoint
  std::vector<double> speed;
  std::vector<Eigen::Vector3d> unit;  // zero when stationary
  std::vector<double> weight;         // trapezoid weights
};

Velocities ComputeVelocities(const Trajectory& traj,
                             const BoundaryCondition& bc) {
  const int m = traj.size();
  const double dt = traj.grid.step();
  Velocities out;
  out.v.resize(m);
  out.speed.resize(m);
  out.unit.resize(m);
  out.weight.assign(m, 1.0);
  out.weight[m - 1] = 0.5;
  for (int i = 0; i < m; ++i) {
    const WorldPoint prev = i == 0 ? bc.p0 : traj.Waypoint(i - 1);
    out.v[i] = (traj.Waypoint(i) - prev) / dt;
    out.speed[i] = out.v[i].norm();
    out.unit[i] = out.speed[i] > kStationary
                      ? Eigen::Vector3d(out.v[i] / out.speed[i])
                      : Eigen::Vector3d::Zero();
  }
  return out;
}

// Adds the derivative of sum_i w_i f_i |v_i| with respect to the waypoints,
// given f_i and df_i/dq_i.
void AccumulateArcLength(const Velocities& vel, const std::vector<double>& f,
                         const std::vector<Eigen::Vector3d>& df, double dt,
                         Waypoints* grad) {
  const int m = static_cast<int>(f.size());
  for (int i = 0; i < m; ++i) {
    if (vel.speed[i] <= kStationary) continue;
    Eigen::Vector3d g =
        vel.weight[i] * (df[i] * vel.speed[i] + f[i] * vel.unit[i] / dt);
    grad->row(i) += g.transpose();
    if (i > 0) {
      grad->row(i - 1) -= (vel.weight[i] * f[i] * vel.unit[i] / dt).transpose();
    }
  }
}

double Finalize(double sum, int intervals, Waypoints* grad) {
  *grad /= intervals;
  return sum / intervals;
}

}  // namespace

PointCost ObstaclePointCost(double d, double eps) {
  if (!(eps > 0.0)) {
    throw InvalidArgument("ObstaclePointCost: eps_obs must be positive");
  }
  if (d < 0.0) return {-d + 0.5 * eps, -1.0};
  if (d <= eps) {
    const double r = d - eps;
    return {r * r / (2.0 * eps), r / eps};
  }
  return {0.0, 0.0};
}

TermResult Safety(const Trajectory& traj, const BoundaryCondition& bc,
                  const mapping::DistanceView& view, double eps) {
  const int m = traj.size();
  const Velocities vel = ComputeVelocities(traj, bc);
  std::vector<double> f(m);
  std::vector<Eigen::Vector3d> df(m);
  double sum =
      0.5 * ObstaclePointCost(view.Distance(bc.p0), eps).value * bc.v0.norm();
  for (int i = 0; i < m; ++i) {
    const mapping::DistanceSample s =
        view.DistanceAndGradient(traj.Waypoint(i));
    const PointCost c = ObstaclePointCost(s.distance, eps);
    f[i] = c.value;
    df[i] = c.derivative * s.gradient;
    sum += vel.weight[i] * c.value * vel.speed[i];
  }
  TermResult out;
  out.gradient = Waypoints::Zero(m, 3);
  AccumulateArcLength(vel, f, df, traj.grid.step(), &out.gradient);
  out.value = Finalize(sum, m, &out.gradient);
  return out;
}

Waypoints SafetyFunctionalGradient(const Trajectory& traj,
                                   const BoundaryCondition& bc,
                                   const mapping::DistanceView& view,
                                   double eps) {
  const int m = traj.size();
  const double dt = traj.grid.step();
  const Velocities vel = ComputeVelocities(traj, bc);
  Waypoints grad = Waypoints::Zero(m, 3);
  for (int i = 0; i < m; ++i) {
    if (vel.speed[i] <= kStationary) continue;
    const Eigen::Vector3d prev_v = i == 0 ? bc.v0 : vel.v[i - 1];
    const Eigen::Vector3d acc = (vel.v[i] - prev_v) / dt;
    const Eigen::Matrix3d proj =
        Eigen::Matrix3d::Identity() - vel.unit[i] * vel.unit[i].transpose();
    const Eigen::Vector3d kappa = proj * acc / (vel.speed[i] * vel.speed[i]);
    const mapping::DistanceSample s =
        view.DistanceAndGradient(traj.Waypoint(i));
    const PointCost c = ObstaclePointCost(s.distance, eps);
    const Eigen::Vector3d g =
        vel.speed[i] * (proj * (c.derivative * s.gradient) - c.value * kappa);
    grad.row(i) = g.transpose() / m;
  }
  return grad;
}

TermResult Occlusion(const Trajectory& traj, const BoundaryCondition& bc,
                     const ActorForecast& actor,
                     const mapping::DistanceView& view,
                     const OcclusionOptions& options) {
  const int m = traj.size();
  if (actor.grid.sample_count() < m + 1) {
    throw InvalidArgument("Occlusion: forecast shorter than the trajectory");
  }
  if (options.min_samples < 1) {
    throw InvalidArgument("Occlusion: min_samples must be positive");
  }
  const double voxel = view.grid().geometry().voxel_size;
  const Eigen::Vector3d lift(0.0, 0.0, options.target_height);

  // Sightline integral from q to a and its gradient with respect to q.
  auto sightline = [&](const WorldPoint& q, const WorldPoint& a,
                       Eigen::Vector3d* dq) {
    const Eigen::Vector3d l = a - q;
    const double len = l.norm();
    if (len <= 0.0) {
      if (dq) dq->setZero();
      return 0.0;
    }
    const int n =
        std::max(options.min_samples, static_cast<int>(std::ceil(len / voxel)));
    double sum_c = 0.0;
    Eigen::Vector3d lever = Eigen::Vector3d::Zero();
    for (int k = 0; k < n; ++k) {
      const double tau = (k + 0.5) / n;
      const WorldPoint p = q + tau * l;
      if (dq) {
        const mapping::DistanceSample s = view.DistanceAndGradient(p);
        const PointCost c = ObstaclePointCost(s.distance, options.eps);
        sum_c += c.value;
        lever += (1.0 - tau) * c.derivative * s.gradient;
      } else {
        sum_c += ObstaclePointCost(view.Distance(p), options.eps).value;
      }
    }
    if (dq) *dq = -(l / len) * sum_c / n + (len / n) * lever;
    return len * sum_c / n;
  };

  const Velocities vel = ComputeVelocities(traj, bc);
  std::vector<double> f(m);
  std::vector<Eigen::Vector3d> df(m);
  double sum = 0.5 * sightline(bc.p0, actor.poses[0].position + lift, nullptr) *
               bc.v0.norm();
  for (int i = 0; i < m; ++i) {
    f[i] =
        sightline(traj.Waypoint(i), actor.poses[i + 1].position + lift, &df[i]);
    sum += vel.weight[i] * f[i] * vel.speed[i];
  }
  TermResult out;
  out.gradient = Waypoints::Zero(m, 3);
  AccumulateArcLength(vel, f, df, traj.grid.step(), &out.gradient);
  out.value = Finalize(sum, m, &out.gradient);
  return out;
}

}  // namespace costs
}  // namespace skyframe
