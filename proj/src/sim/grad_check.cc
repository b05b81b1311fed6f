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

#include "skyframe/sim/grad_check.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "json.hpp"
#include "sim/json_reader.h"
#include "skyframe/core/diff_operators.h"
#include "skyframe/core/seed.h"
#include "skyframe/costs/obstacle_costs.h"
#include "skyframe/costs/quadratic_cost.h"
#include "skyframe/sim/world.h"

namespace skyframe {
namespace sim {
namespace {

using nlohmann::json;

constexpr int kSchemaVersion = 1;

Waypoints CentralDifference(const std::function<double(const Waypoints&)>& f,
                            const Waypoints& x, double h) {
  Waypoints g(x.rows(), 3);
  Waypoints probe = x;
  for (int i = 0; i < x.rows(); ++i) {
    for (int j = 0; j < 3; ++j) {
      probe(i, j) = x(i, j) + h;
      const double plus = f(probe);
      probe(i, j) = x(i, j) - h;
      const double minus = f(probe);
      probe(i, j) = x(i, j);
      g(i, j) = (plus - minus) / (2.0 * h);
    }
  }
  return g;
}

double RelativeError(const Waypoints& analytic, const Waypoints& reference) {
  return (analytic - reference).norm() /
         std::max({reference.norm(), analytic.norm(), 1e-9});
}

void Record(TermCheck* check, double value, double error) {
  if (value > 0.0) ++check->nonzero;
  check->max_relative_error = std::max(check->max_relative_error, error);
}

json TermJson(const TermCheck& check) {
  return {{"max_relative_error", check.max_relative_error},
          {"nonzero", check.nonzero}};
}

}  // namespace

void GradCheckConfig::Validate() const {
  if (instances < 1)
    throw InvalidArgument("grad-check: instances must be >= 1");
  if (spheres < 0) throw InvalidArgument("grad-check: spheres must be >= 0");
  if (samples < 3) throw InvalidArgument("grad-check: samples must be >= 3");
  if (!(horizon > 0.0) || !(quadratic_step > 0.0) || !(field_step > 0.0)) {
    throw InvalidArgument(
        "grad-check: horizon and finite-difference steps must be positive");
  }
  if (!std::isfinite(target_height)) {
    throw InvalidArgument("grad-check: target_height must be finite");
  }
}

GradCheckConfig GradCheckConfigFromJson(const std::string& text) {
  GradCheckConfig c;
  try {
    const json doc = json::parse(text);
    internal::Reader r(doc, "grad_check");
    int version = kSchemaVersion;
    r.Get("schema_version", &version);
    if (version != kSchemaVersion) {
      throw InvalidArgument("grad-check: unsupported schema_version " +
                            std::to_string(version));
    }
    r.Get("seed", &c.seed);
    r.Get("instances", &c.instances);
    r.Get("spheres", &c.spheres);
    r.Get("horizon", &c.horizon);
    r.Get("samples", &c.samples);
    r.Get("quadratic_step", &c.quadratic_step);
    r.Get("field_step", &c.field_step);
    r.Get("target_height", &c.target_height);
    r.Finish();
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("grad-check: ") + e.what());
  }
  c.Validate();
  return c;
}

std::string GradCheckConfigToJson(const GradCheckConfig& c) {
  const json doc = {{"schema_version", kSchemaVersion},
                    {"seed", c.seed},
                    {"instances", c.instances},
                    {"spheres", c.spheres},
                    {"horizon", c.horizon},
                    {"samples", c.samples},
                    {"quadratic_step", c.quadratic_step},
                    {"field_step", c.field_step},
                    {"target_height", c.target_height}};
  return doc.dump(2) + "\n";
}

GradCheckResult RunGradCheck(const GradCheckConfig& config) {
  config.Validate();
  WorldConfig world_config;
  world_config.kind = WorldKind::kSpheres;
  world_config.spheres.count = config.spheres;
  const TimeGrid grid(config.horizon, config.samples);
  const int m = grid.optimized_count();
  const double size_x = world_config.size.x();
  const double size_y = world_config.size.y();

  GradCheckResult result;
  result.instances = config.instances;
  std::mt19937_64 rng(DeriveSeed(config.seed, "grad-check"));
  for (int k = 0; k < config.instances; ++k) {
    std::uniform_real_distribution<double> x(0.15 * size_x, 0.85 * size_x);
    std::uniform_real_distribution<double> y(0.15 * size_y, 0.85 * size_y);
    std::uniform_real_distribution<double> z(1.0, world_config.spheres.z_max);
    std::normal_distribution<double> noise(0.0, 0.6);

    const Eigen::Vector2d actor_from(x(rng), y(rng));
    const Eigen::Vector2d actor_to(x(rng), y(rng));
    const auto world = BuildWorld(world_config, {actor_from, actor_to}, rng());
    const mapping::DistanceView view = world->view();

    std::vector<Pose> poses;
    const double heading = std::atan2(actor_to.y() - actor_from.y(),
                                      actor_to.x() - actor_from.x());
    for (int i = 0; i < grid.sample_count(); ++i) {
      const double s = static_cast<double>(i) / (grid.sample_count() - 1);
      const Eigen::Vector2d p = actor_from + s * (actor_to - actor_from);
      poses.push_back({WorldPoint(p.x(), p.y(), 0.0), heading});
    }
    const ActorForecast actor(0.0, grid, poses);

    const WorldPoint a(x(rng), y(rng), z(rng));
    const WorldPoint b(x(rng), y(rng), z(rng));
    Waypoints path(m, 3);
    for (int i = 0; i < m; ++i) {
      const double s = (i + 1.0) / m;
      path.row(i) = (a + s * (b - a)).transpose() +
                    Eigen::RowVector3d(noise(rng), noise(rng), noise(rng));
    }
    BoundaryCondition bc;
    bc.p0 = a;
    bc.v0 = (b - a) / grid.horizon();
    bc.a0 = Eigen::Vector3d(noise(rng), noise(rng), noise(rng));
    const Trajectory traj(grid, path);

    const costs::QuadraticCost smooth =
        costs::SmoothnessCost(DiffOperators::Build(grid, bc));
    Record(
        &result.smoothness, smooth.Value(path),
        RelativeError(smooth.Gradient(path),
                      CentralDifference(
                          [&](const Waypoints& p) { return smooth.Value(p); },
                          path, config.quadratic_step)));

    const costs::QuadraticCost shot =
        costs::ShotQualityCost(costs::ShotPath(actor, ShotParams{}));
    Record(&result.shot, shot.Value(path),
           RelativeError(shot.Gradient(path),
                         CentralDifference(
                             [&](const Waypoints& p) { return shot.Value(p); },
                             path, config.quadratic_step)));

    const double eps = costs::kDefaultObstacleEpsilon;
    const costs::TermResult safety = costs::Safety(traj, bc, view, eps);
    Record(&result.obstacle, safety.value,
           RelativeError(safety.gradient, CentralDifference(
                                              [&](const Waypoints& p) {
                                                return costs::Safety(
                                                           Trajectory(grid, p),
                                                           bc, view, eps)
                                                    .value;
                                              },
                                              path, config.field_step)));

    costs::OcclusionOptions options;
    options.target_height = config.target_height;
    const costs::TermResult occlusion =
        costs::Occlusion(traj, bc, actor, view, options);
    Record(&result.occlusion, occlusion.value,
           RelativeError(occlusion.gradient,
                         CentralDifference(
                             [&](const Waypoints& p) {
                               return costs::Occlusion(Trajectory(grid, p), bc,
                                                       actor, view, options)
                                   .value;
                             },
                             path, config.field_step)));
  }
  return result;
}

std::string GradCheckToJson(const GradCheckResult& result) {
  const json out = {{"instances", result.instances},
                    {"terms",
                     {{"smoothness", TermJson(result.smoothness)},
                      {"obstacle", TermJson(result.obstacle)},
                      {"occlusion", TermJson(result.occlusion)},
                      {"shot", TermJson(result.shot)}}}};
  return out.dump(2) + "\n";
}

}  // namespace sim
}  // namespace skyframe
