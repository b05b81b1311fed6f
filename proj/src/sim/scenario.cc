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

#include "skyframe/sim/scenario.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <set>
#include <string>
#include <utility>

#include "json.hpp"
#include "sim/json_reader.h"
#include "skyframe/core/seed.h"
#include "skyframe/costs/quadratic_cost.h"

namespace skyframe {
namespace sim {
namespace {

using internal::Reader;
using nlohmann::json;

constexpr int kSchemaVersion = 1;

// Integer ratio a / b, or -1 when it is not a whole number.
std::int64_t WholeRatio(double a, double b) {
  const double r = a / b;
  const double rounded = std::round(r);
  if (std::abs(r - rounded) > 1e-9 * std::max(1.0, std::abs(r))) return -1;
  return static_cast<std::int64_t>(rounded);
}

json ToJson(const Eigen::Vector2d& v) { return json::array({v.x(), v.y()}); }
json ToJson(const Eigen::Vector3d& v) {
  return json::array({v.x(), v.y(), v.z()});
}

std::string ToString(ActorScriptKind kind) {
  return kind == ActorScriptKind::kPolyline ? "polyline" : "random_walk";
}

ActorScriptKind ScriptFromString(const std::string& name) {
  if (name == "polyline") return ActorScriptKind::kPolyline;
  if (name == "random_walk") return ActorScriptKind::kRandomWalk;
  throw InvalidArgument("scenario: unknown actor script '" + name + "'");
}

std::string ToString(forecast::ActorKind kind) {
  return kind == forecast::ActorKind::kPerson ? "person" : "vehicle";
}

forecast::ActorKind FilterFromString(const std::string& name) {
  if (name == "person") return forecast::ActorKind::kPerson;
  if (name == "vehicle") return forecast::ActorKind::kVehicle;
  throw InvalidArgument("scenario: unknown actor filter '" + name + "'");
}

void ReadWorld(Reader r, WorldConfig* w) {
  std::string kind = ToString(w->kind);
  r.Get("kind", &kind);
  w->kind = WorldKindFromString(kind);
  r.Get("size", &w->size);
  r.Get("voxel_size", &w->voxel_size);
  r.Get("truncation", &w->truncation);
  r.Get("height_map_file", &w->height_map_file);
  if (auto s = r.Child("spheres")) {
    SphereParams& p = w->spheres;
    s->Get("count", &p.count);
    s->Get("radius_min", &p.radius_min);
    s->Get("radius_max", &p.radius_max);
    s->Get("z_min", &p.z_min);
    s->Get("z_max", &p.z_max);
    s->Get("corridor_clearance", &p.corridor_clearance);
    s->Get("max_attempts", &p.max_attempts);
    s->Finish();
  }
  if (auto b = r.Child("blocks")) {
    BlockworldParams& p = w->blocks;
    b->Get("blocks", &p.blocks);
    b->Get("length_min", &p.length_min);
    b->Get("length_max", &p.length_max);
    b->Get("gap_min", &p.gap_min);
    b->Get("gap_max", &p.gap_max);
    b->Get("depth_min", &p.depth_min);
    b->Get("depth_max", &p.depth_max);
    b->Get("height_min", &p.height_min);
    b->Get("height_max", &p.height_max);
    b->Get("corridor_half_width", &p.corridor_half_width);
    b->Get("path_y", &p.path_y);
    b->Get("start_x", &p.start_x);
    b->Finish();
  }
  if (auto m = r.Child("mound")) {
    m->Get("height", &w->mound.height);
    m->Get("sigma", &w->mound.sigma);
    m->Get("center", &w->mound.center);
    m->Finish();
  }
  r.Finish();
}

json WriteWorld(const WorldConfig& w) {
  const SphereParams& s = w.spheres;
  const BlockworldParams& b = w.blocks;
  return {
      {"kind", ToString(w.kind)},
      {"size", ToJson(w.size)},
      {"voxel_size", w.voxel_size},
      {"truncation", w.truncation},
      {"height_map_file", w.height_map_file},
      {"spheres",
       {{"count", s.count},
        {"radius_min", s.radius_min},
        {"radius_max", s.radius_max},
        {"z_min", s.z_min},
        {"z_max", s.z_max},
        {"corridor_clearance", s.corridor_clearance},
        {"max_attempts", s.max_attempts}}},
      {"blocks",
       {{"blocks", b.blocks},
        {"length_min", b.length_min},
        {"length_max", b.length_max},
        {"gap_min", b.gap_min},
        {"gap_max", b.gap_max},
        {"depth_min", b.depth_min},
        {"depth_max", b.depth_max},
        {"height_min", b.height_min},
        {"height_max", b.height_max},
        {"corridor_half_width", b.corridor_half_width},
        {"path_y", b.path_y},
        {"start_x", b.start_x}}},
      {"mound",
       {{"height", w.mound.height},
        {"sigma", w.mound.sigma},
        {"center", ToJson(w.mound.center)}}},
  };
}

void ReadActor(Reader r, ActorConfig* a) {
  std::string script = ToString(a->script);
  std::string filter = ToString(a->filter);
  r.Get("script", &script);
  r.Get("filter", &filter);
  a->script = ScriptFromString(script);
  a->filter = FilterFromString(filter);
  r.Get("waypoints", &a->waypoints);
  r.Get("speed", &a->speed);
  r.Get("turn_sigma", &a->turn_sigma);
  r.Get("edge_margin", &a->edge_margin);
  r.Get("measurement_rate", &a->measurement_rate);
  r.Get("measurement_noise", &a->measurement_noise);
  r.Finish();
}

json WriteActor(const ActorConfig& a) {
  json waypoints = json::array();
  for (const auto& p : a.waypoints) waypoints.push_back(ToJson(p));
  return {{"script", ToString(a.script)},
          {"filter", ToString(a.filter)},
          {"waypoints", waypoints},
          {"speed", a.speed},
          {"turn_sigma", a.turn_sigma},
          {"edge_margin", a.edge_margin},
          {"measurement_rate", a.measurement_rate},
          {"measurement_noise", a.measurement_noise}};
}

void ReadLidar(Reader r, LidarConfig* l) {
  r.Get("rings", &l->rings);
  r.Get("min_elevation_deg", &l->min_elevation_deg);
  r.Get("max_elevation_deg", &l->max_elevation_deg);
  r.Get("azimuths", &l->azimuths);
  r.Get("range", &l->range);
  r.Finish();
}

json WriteLidar(const LidarConfig& l) {
  return {{"rings", l.rings},
          {"min_elevation_deg", l.min_elevation_deg},
          {"max_elevation_deg", l.max_elevation_deg},
          {"azimuths", l.azimuths},
          {"range", l.range}};
}

void ReadPlanner(Reader r, planner::PlannerConfig* p) {
  r.Get("eta", &p->eta);
  r.Get("eps0", &p->eps0);
  r.Get("eps1", &p->eps1);
  r.Get("max_iterations", &p->max_iterations);
  r.Get("horizon", &p->horizon);
  r.Get("samples", &p->samples);
  if (auto w = r.Child("weights")) {
    w->Get("obstacle", &p->weights.obstacle);
    w->Get("occlusion", &p->weights.occlusion);
    w->Get("shot", &p->weights.shot);
    w->Finish();
  }
  if (auto s = r.Child("shot")) {
    s->Get("rho", &p->shot.rho);
    s->Get("psi_rel", &p->shot.psi_rel);
    s->Get("theta_rel", &p->shot.theta_rel);
    s->Finish();
  }
  if (auto o = r.Child("objective")) {
    costs::ObjectiveOptions& opt = p->objective;
    o->Get("derivative_weights", &opt.derivative_weights);
    o->Get("obstacle_epsilon", &opt.obstacle_epsilon);
    o->Get("occlusion_epsilon", &opt.occlusion.eps);
    o->Get("target_height", &opt.occlusion.target_height);
    o->Get("occlusion_min_samples", &opt.occlusion.min_samples);
    o->Finish();
  }
  r.Finish();
}

json WritePlanner(const planner::PlannerConfig& p) {
  const costs::ObjectiveOptions& o = p.objective;
  return {{"eta", p.eta},
          {"eps0", p.eps0},
          {"eps1", p.eps1},
          {"max_iterations", p.max_iterations},
          {"horizon", p.horizon},
          {"samples", p.samples},
          {"weights",
           {{"obstacle", p.weights.obstacle},
            {"occlusion", p.weights.occlusion},
            {"shot", p.weights.shot}}},
          {"shot",
           {{"rho", p.shot.rho},
            {"psi_rel", p.shot.psi_rel},
            {"theta_rel", p.shot.theta_rel}}},
          {"objective",
           {{"derivative_weights", o.derivative_weights},
            {"obstacle_epsilon", o.obstacle_epsilon},
            {"occlusion_epsilon", o.occlusion.eps},
            {"target_height", o.occlusion.target_height},
            {"occlusion_min_samples", o.occlusion.min_samples}}}};
}

// Random-walk polyline: one vertex per second of walking, heading
// perturbed by Gaussian turns and steered back toward the center when the
// next vertex would leave the margin.
std::vector<Eigen::Vector2d> RandomWalk(const ActorConfig& a,
                                        const WorldConfig& w, double duration,
                                        std::uint64_t seed) {
  std::mt19937_64 rng(DeriveSeed(seed, "actor-walk"));
  std::normal_distribution<double> turn(0.0, a.turn_sigma);
  std::uniform_real_distribution<double> initial(-std::numbers::pi,
                                                 std::numbers::pi);
  const Eigen::Vector2d lo = Eigen::Vector2d::Constant(a.edge_margin);
  const Eigen::Vector2d hi = w.size.head<2>() - lo;
  const Eigen::Vector2d center = 0.5 * w.size.head<2>();
  std::vector<Eigen::Vector2d> path = {
      a.waypoints.empty() ? center : a.waypoints.front()};
  double heading = initial(rng);
  const int steps = static_cast<int>(std::ceil(duration)) + 1;
  for (int i = 0; i < steps; ++i) {
    heading += turn(rng);
    Eigen::Vector2d next =
        path.back() +
        a.speed * Eigen::Vector2d(std::cos(heading), std::sin(heading));
    if ((next.array() < lo.array()).any() ||
        (next.array() > hi.array()).any()) {
      const Eigen::Vector2d to_center = center - path.back();
      heading = std::atan2(to_center.y(), to_center.x());
      next = path.back() +
             a.speed * Eigen::Vector2d(std::cos(heading), std::sin(heading));
    }
    path.push_back(next);
  }
  return path;
}

WorldPoint Lift(const Pose& pose, double height) {
  return pose.position + Eigen::Vector3d(0.0, 0.0, height);
}

double YawToward(const WorldPoint& from, const WorldPoint& to) {
  const Eigen::Vector3d d = to - from;
  if (std::hypot(d.x(), d.y()) == 0.0) return 0.0;
  return std::atan2(d.y(), d.x());
}

}  // namespace

void ScenarioConfig::Validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw InvalidArgument(std::string("scenario: ") + what);
  };
  require(duration > 0.0 && std::isfinite(duration), "duration must be > 0");
  require(replan_period > 0.0, "replan_period must be > 0");
  require(metric_period > 0.0, "metric_period must be > 0");
  require(scan_period > 0.0, "scan_period must be > 0");
  require(WholeRatio(duration, replan_period) >= 1,
          "duration must be a whole number of replan periods");
  require(WholeRatio(replan_period, metric_period) >= 1,
          "replan_period must be a whole number of metric periods");
  require(!online_mapping || WholeRatio(scan_period, metric_period) >= 1,
          "scan_period must be a whole number of metric periods");
  require(visibility_target_height >= 0.0,
          "visibility_target_height must be >= 0");
  require(world.size.minCoeff() > 0.0, "world size must be positive");
  require(world.voxel_size > 0.0, "world voxel_size must be > 0");
  require(world.truncation > 0.0, "world truncation must be > 0");
  require(!actor.waypoints.empty(), "actor needs at least one waypoint");
  require(actor.speed >= 0.0, "actor speed must be >= 0");
  require(actor.turn_sigma >= 0.0, "actor turn_sigma must be >= 0");
  require(actor.measurement_rate > 0.0, "measurement_rate must be > 0");
  require(actor.measurement_noise >= 0.0, "measurement_noise must be >= 0");
  require(lidar.rings >= 1 && lidar.azimuths >= 1 && lidar.range > 0.0,
          "lidar needs rings, azimuths and range");
  for (const auto& p : actor.waypoints) {
    require(p.allFinite(), "actor waypoints must be finite");
  }
  if (uav_start_offset) {
    require(uav_start_offset->allFinite(), "uav_start_offset must be finite");
  }
  planner.Validate();
}

ScenarioConfig ScenarioFromJson(const std::string& text) {
  ScenarioConfig c;
  try {
    const json doc = json::parse(text);
    Reader r(doc, "scenario");
    int version = kSchemaVersion;
    r.Get("schema_version", &version);
    if (version != kSchemaVersion) {
      throw InvalidArgument("scenario: unsupported schema_version " +
                            std::to_string(version));
    }
    r.Get("name", &c.name);
    r.Get("seed", &c.seed);
    r.Get("duration", &c.duration);
    r.Get("replan_period", &c.replan_period);
    r.Get("metric_period", &c.metric_period);
    r.Get("online_mapping", &c.online_mapping);
    r.Get("scan_period", &c.scan_period);
    r.Get("uav_start_offset", &c.uav_start_offset);
    r.Get("visibility_target_height", &c.visibility_target_height);
    if (auto w = r.Child("world")) ReadWorld(*w, &c.world);
    if (auto a = r.Child("actor")) ReadActor(*a, &c.actor);
    if (auto l = r.Child("lidar")) ReadLidar(*l, &c.lidar);
    if (auto p = r.Child("planner")) ReadPlanner(*p, &c.planner);
    r.Finish();
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("scenario: ") + e.what());
  }
  c.Validate();
  return c;
}

std::string ScenarioToJson(const ScenarioConfig& c) {
  json doc = {
      {"schema_version", kSchemaVersion},
      {"name", c.name},
      {"seed", c.seed},
      {"duration", c.duration},
      {"replan_period", c.replan_period},
      {"metric_period", c.metric_period},
      {"online_mapping", c.online_mapping},
      {"scan_period", c.scan_period},
      {"uav_start_offset",
       c.uav_start_offset ? ToJson(*c.uav_start_offset) : json(nullptr)},
      {"visibility_target_height", c.visibility_target_height},
      {"world", WriteWorld(c.world)},
      {"actor", WriteActor(c.actor)},
      {"lidar", WriteLidar(c.lidar)},
      {"planner", WritePlanner(c.planner)}};
  return doc.dump(2) + "\n";
}

ActorScript::ActorScript(std::vector<Eigen::Vector2d> path, double speed)
    : path_(std::move(path)), speed_(speed) {
  if (path_.empty()) throw InvalidArgument("ActorScript: empty path");
  if (!(speed >= 0.0)) throw InvalidArgument("ActorScript: negative speed");
  arc_.push_back(0.0);
  for (std::size_t i = 1; i < path_.size(); ++i) {
    arc_.push_back(arc_.back() + (path_[i] - path_[i - 1]).norm());
  }
}

ActorScript ActorScript::FromConfig(const ActorConfig& config,
                                    const WorldConfig& world, double duration,
                                    std::uint64_t seed) {
  if (config.script == ActorScriptKind::kPolyline) {
    return ActorScript(config.waypoints, config.speed);
  }
  return ActorScript(RandomWalk(config, world, duration, seed), config.speed);
}

Pose ActorScript::At(double t, const mapping::HeightMap& terrain) const {
  // Before t = 0 the actor approaches along the first segment's line.
  const double s = std::min(speed_ * t, arc_.back());
  // Segment k spans [arc_[k], arc_[k + 1]]; zero-length segments are
  // skipped so the heading stays defined.
  std::size_t k = 0;
  while (k + 2 < path_.size() && s > arc_[k + 1]) ++k;
  Eigen::Vector2d xy = path_.front();
  double heading = 0.0;
  if (path_.size() >= 2) {
    const double len = arc_[k + 1] - arc_[k];
    const double f = len > 0.0 ? (s - arc_[k]) / len : 0.0;
    xy = path_[k] + f * (path_[k + 1] - path_[k]);
    std::size_t j = k;
    while (j + 1 < path_.size() && arc_[j + 1] - arc_[j] == 0.0) ++j;
    if (j + 1 < path_.size()) {
      const Eigen::Vector2d d = path_[j + 1] - path_[j];
      heading = std::atan2(d.y(), d.x());
    }
  }
  Pose pose;
  pose.position = WorldPoint(xy.x(), xy.y(), terrain.HeightAt(xy.x(), xy.y()));
  pose.heading = NormalizeAngle(heading);
  return pose;
}

RunMetrics ComputeMetrics(const Trace& trace) {
  RunMetrics m;
  m.samples = static_cast<int>(trace.samples.size());
  int visible = 0;
  double distance = 0.0;
  for (const FlightSample& s : trace.samples) {
    visible += s.visible ? 1 : 0;
    distance += s.shot_distance;
    if (s.signed_distance < 0.0) m.collision = true;
  }
  if (m.samples > 0) {
    m.visibility = static_cast<double>(visible) / m.samples;
    m.mean_shot_distance = distance / m.samples;
  }
  double cost = 0.0;
  for (const CycleRecord& c : trace.cycles) {
    m.normalized_cost.push_back(c.report.total);
    m.cycle_wall_ms.push_back(c.wall_time_ms);
    cost += c.report.total;
  }
  if (!trace.cycles.empty())
    m.mean_normalized_cost = cost / trace.cycles.size();
  return m;
}

Simulation::Simulation(const ScenarioConfig& config)
    : config_(config),
      actor_(ActorScript::FromConfig(config.actor, config.world,
                                     config.duration + config.planner.horizon,
                                     config.seed)),
      tracker_(config.actor.filter),
      next_measurement_(-static_cast<std::int64_t>(
          std::llround(config.replan_period * config.actor.measurement_rate))),
      noise_seed_(DeriveSeed(config.seed, "measurement-noise")) {
  config_.Validate();
  world_ = BuildWorld(config_.world, actor_.path(),
                      DeriveSeed(config_.seed, "world"));

  const Pose start = actor_.At(0.0, world_->terrain());
  const Eigen::Vector3d offset = config_.uav_start_offset.value_or(
      costs::ShotOffset(start.heading, config_.planner.shot));
  uav_.p0 = start.position + offset;
  // Lift the start out of any obstacle so the first plan begins in free
  // space.
  const double top =
      world_->geometry().origin.z() +
      world_->geometry().dims.z() * world_->geometry().voxel_size;
  while (world_->SignedDistance(uav_.p0) < 1.0 && uav_.p0.z() < top) {
    uav_.p0.z() += world_->geometry().voxel_size;
  }
  if (!world_->geometry().Contains(uav_.p0)) {
    throw InvalidArgument("scenario: UAV start lies outside the world box");
  }
  uav_heading_ = YawToward(uav_.p0, start.position);

  if (config_.online_mapping) {
    lidar_pattern_ = LidarPattern(config_.lidar);
    map_ = std::make_unique<mapping::MapStore>(world_->geometry(),
                                               mapping::OccupancyParams(),
                                               config_.world.truncation);
  }
}

void Simulation::Advance(double duration) {
  const std::int64_t cycles = WholeRatio(duration, config_.replan_period);
  if (cycles < 0) {
    throw InvalidArgument(
        "Simulation::Advance: duration must be a whole number of replan "
        "periods");
  }
  for (std::int64_t i = 0; i < cycles; ++i) RunCycle();
}

void Simulation::RunCycle() {
  const double now = time();
  const mapping::HeightMap& terrain = world_->terrain();

  // Actor measurements up to and including `now`.
  std::vector<forecast::ActorMeasurement> measurements;
  const double rate = config_.actor.measurement_rate;
  const double noise = config_.actor.measurement_noise;
  while (static_cast<double>(next_measurement_) / rate <= now + 1e-9) {
    const double t = static_cast<double>(next_measurement_) / rate;
    const Pose pose = actor_.At(t, terrain);
    forecast::ActorMeasurement m;
    m.timestamp = t;
    m.position = pose.position;
    if (noise > 0.0) {
      // One generator per measurement keeps the noise independent of how
      // the run is split into Advance calls.
      std::mt19937_64 rng(SplitMix64(
          noise_seed_ + static_cast<std::uint64_t>(next_measurement_)));
      std::normal_distribution<double> n(0.0, noise);
      m.position.x() += n(rng);
      m.position.y() += n(rng);
    }
    if (config_.actor.filter == forecast::ActorKind::kVehicle) {
      m.heading = pose.heading;
    }
    measurements.push_back(m);
    ++next_measurement_;
  }

  const std::int64_t per_cycle =
      WholeRatio(config_.replan_period, config_.metric_period);
  const std::int64_t per_scan =
      WholeRatio(config_.scan_period, config_.metric_period);

  std::shared_ptr<const mapping::MapSnapshot> snapshot;
  std::optional<mapping::DistanceView> online_view;
  const mapping::DistanceView truth_view = world_->view();
  const mapping::DistanceView* view = &truth_view;
  if (map_) {
    if (cycle_ == 0) {
      // Takeoff: scan once per voxel of climb from just above the ground
      // to the start altitude, then twice at the start pose so space seen
      // once there is classified free before the first plan.
      const double step = config_.world.voxel_size;
      const double ground = terrain.HeightAt(uav_.p0.x(), uav_.p0.y());
      for (double z = ground + step; z < uav_.p0.z(); z += step) {
        const WorldPoint sensor(uav_.p0.x(), uav_.p0.y(), z);
        if (world_->IsOccupied(sensor)) continue;
        map_->Integrate(sensor, SimulateLidar(*world_, sensor, lidar_pattern_,
                                              config_.lidar.range));
      }
      for (int i = 0; i < 2; ++i) {
        map_->Integrate(uav_.p0, SimulateLidar(*world_, uav_.p0, lidar_pattern_,
                                               config_.lidar.range));
      }
    }
    snapshot = map_->Snapshot();
    online_view.emplace(snapshot->view());
    view = &*online_view;
  }

  const planner::PlanWorld plan_world{view, &terrain};
  planner::PlanResult plan =
      planner::PlanCycle(&tracker_, measurements, prev_ ? &*prev_ : nullptr,
                         uav_, uav_heading_, now, plan_world, config_.planner);

  CycleRecord record;
  record.time = now;
  record.report = plan.report;
  record.initial_report = plan.initial_report;
  record.iterations = plan.iterations;
  record.stop_reason = plan.stop_reason;
  record.wall_time_ms = plan.wall_time_ms;
  record.waypoints = plan.trajectory.waypoints;
  record.headings = plan.headings;
  record.forecast = plan.forecast.poses;
  record.map_version = snapshot ? snapshot->version() : 0;
  trace_.cycles.push_back(std::move(record));

  // Fly the plan until the next cycle.
  const ShotParams& shot = config_.planner.shot;
  for (std::int64_t k = 0; k < per_cycle; ++k, ++next_sample_) {
    const double t = static_cast<double>(next_sample_) * config_.metric_period;
    const BoundaryCondition state =
        planner::StateAt(plan.trajectory, plan.boundary, t - now);
    const Pose actor = actor_.At(t, terrain);
    FlightSample s;
    s.time = t;
    s.uav = state.p0;
    s.actor = actor.position;
    s.actor_heading = actor.heading;
    s.visible = world_->LineOfSight(
        s.uav, Lift(actor, config_.visibility_target_height));
    s.shot_distance =
        (s.uav - actor.position - costs::ShotOffset(actor.heading, shot))
            .norm();
    s.signed_distance = world_->SignedDistance(s.uav);
    trace_.samples.push_back(s);
    if (map_ && next_sample_ > 0 && next_sample_ % per_scan == 0) {
      map_->Integrate(s.uav, SimulateLidar(*world_, s.uav, lidar_pattern_,
                                           config_.lidar.range));
    }
  }

  uav_ =
      planner::StateAt(plan.trajectory, plan.boundary, config_.replan_period);
  uav_heading_ = YawToward(
      uav_.p0, actor_.At(now + config_.replan_period, terrain).position);
  prev_ = std::move(plan);
  ++cycle_;
}

RunMetrics RunScenario(const ScenarioConfig& config, Trace* trace) {
  Simulation sim(config);
  try {
    sim.Advance(config.duration);
  } catch (...) {
    if (trace) *trace = sim.trace();
    throw;
  }
  if (trace) *trace = sim.trace();
  return ComputeMetrics(sim.trace());
}

void WriteCycleCsv(std::ostream& out, const Trace& trace) {
  const auto precision = out.precision(10);
  out << "cycle,time,total,smoothness,obstacle,occlusion,shot,initial_total,"
         "iterations,stop_reason,map_version\n";
  for (std::size_t i = 0; i < trace.cycles.size(); ++i) {
    const CycleRecord& c = trace.cycles[i];
    out << i << "," << c.time << "," << c.report.total << ","
        << c.report.smoothness << "," << c.report.obstacle << ","
        << c.report.occlusion << "," << c.report.shot << ","
        << c.initial_report.total << "," << c.iterations << ","
        << planner::ToString(c.stop_reason) << "," << c.map_version << "\n";
  }
  out.precision(precision);
}

void WriteTimingCsv(std::ostream& out, const Trace& trace) {
  const auto precision = out.precision(10);
  out << "cycle,time,wall_time_ms\n";
  for (std::size_t i = 0; i < trace.cycles.size(); ++i) {
    out << i << "," << trace.cycles[i].time << ","
        << trace.cycles[i].wall_time_ms << "\n";
  }
  out.precision(precision);
}

std::string TraceToJson(const Trace& trace) {
  json cycles = json::array();
  for (const CycleRecord& c : trace.cycles) {
    json waypoints = json::array();
    for (int i = 0; i < c.waypoints.rows(); ++i) {
      waypoints.push_back(ToJson(Eigen::Vector3d(c.waypoints.row(i))));
    }
    json forecast = json::array();
    for (const Pose& p : c.forecast) {
      forecast.push_back(
          {{"position", ToJson(p.position)}, {"heading", p.heading}});
    }
    cycles.push_back({{"time", c.time},
                      {"waypoints", waypoints},
                      {"headings", c.headings},
                      {"forecast", forecast},
                      {"costs",
                       {{"total", c.report.total},
                        {"smoothness", c.report.smoothness},
                        {"obstacle", c.report.obstacle},
                        {"occlusion", c.report.occlusion},
                        {"shot", c.report.shot}}},
                      {"iterations", c.iterations},
                      {"stop_reason", planner::ToString(c.stop_reason)},
                      {"map_version", c.map_version}});
  }
  json samples = json::array();
  for (const FlightSample& s : trace.samples) {
    samples.push_back({{"time", s.time},
                       {"uav", ToJson(s.uav)},
                       {"actor", ToJson(s.actor)},
                       {"actor_heading", s.actor_heading},
                       {"visible", s.visible},
                       {"shot_distance", s.shot_distance},
                       {"signed_distance", s.signed_distance}});
  }
  return json({{"cycles", cycles}, {"samples", samples}}).dump() + "\n";
}

std::string MetricsToJson(const RunMetrics& m, bool include_timing) {
  json doc = {{"visibility", m.visibility},
              {"mean_shot_distance", m.mean_shot_distance},
              {"mean_normalized_cost", m.mean_normalized_cost},
              {"normalized_cost", m.normalized_cost},
              {"collision", m.collision},
              {"samples", m.samples}};
  if (include_timing) doc["cycle_wall_ms"] = m.cycle_wall_ms;
  return doc.dump(2) + "\n";
}

}  // namespace sim
}  // namespace skyframe
