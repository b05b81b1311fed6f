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

#include "skyframe/sim/art.h"

#include <algorithm>
#include <cmath>

#include "json.hpp"
#include "sim/json_reader.h"
#include "skyframe/core/seed.h"

namespace skyframe {
namespace sim {
namespace {

using artistic::ShotContext;
using internal::Reader;
using nlohmann::json;

constexpr int kArtSchemaVersion = 1;

ShotParams ShotFor(const ArtConfig& config, int action) {
  return ShotParams(config.shot_rho,
                    artistic::ShotYaw(artistic::ShotFromIndex(action)),
                    config.shot_theta);
}

ShotContext ContextAt(const ArtConfig& config, const Simulation& sim,
                      const ShotContext& shot_state) {
  ShotContext ctx = shot_state;
  const Pose actor = sim.actor().At(sim.time(), sim.world().terrain());
  ctx.patch = artistic::SampleHeightPatch(sim.world().terrain(), actor,
                                          config.patch_spacing);
  return ctx;
}

double Mean(const std::vector<ArtEpisode>& episodes) {
  double sum = 0.0;
  int count = 0;
  for (const ArtEpisode& e : episodes) {
    for (const ArtStep& s : e.steps) {
      sum += s.reward;
      ++count;
    }
  }
  return count > 0 ? sum / count : 0.0;
}

}  // namespace

void ArtConfig::Validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw InvalidArgument(std::string("art: ") + what);
  };
  require(steps >= 1, "steps must be >= 1");
  require(step_duration > 0.0, "step_duration must be > 0");
  require(shot_rho > 0.0, "shot_rho must be > 0");
  require(patch_spacing > 0.0, "patch_spacing must be > 0");
  require(episodes >= 0, "episodes must be >= 0");
  require(batch >= 0, "batch must be >= 0");
  require(replay_capacity >= 1, "replay_capacity must be >= 1");
  require(eval_episodes >= 1, "eval_episodes must be >= 1");
  require(q.epsilon >= 0.0 && q.epsilon <= 1.0, "q.epsilon must be in [0, 1]");
  require(q.discount >= 0.0 && q.discount <= 1.0,
          "q.discount must be in [0, 1]");
  require(q.learning_rate > 0.0, "q.learning_rate must be > 0");
  ScenarioConfig episode = scenario;
  episode.duration = steps * step_duration;
  episode.Validate();
}

ArtConfig ArtConfigFromJson(const std::string& text) {
  ArtConfig c;
  try {
    const json doc = json::parse(text);
    Reader r(doc, "art");
    int version = kArtSchemaVersion;
    r.Get("schema_version", &version);
    if (version != kArtSchemaVersion) {
      throw InvalidArgument("art: unsupported schema_version " +
                            std::to_string(version));
    }
    if (const auto it = doc.find("scenario"); it != doc.end()) {
      json scenario = *it;
      // The episode length comes from steps * step_duration.
      scenario["duration"] = 1.0;
      c.scenario = ScenarioFromJson(scenario.dump());
    }
    r.Get("steps", &c.steps);
    r.Get("step_duration", &c.step_duration);
    r.Get("shot_rho", &c.shot_rho);
    r.Get("shot_theta", &c.shot_theta);
    r.Get("patch_spacing", &c.patch_spacing);
    if (auto w = r.Child("reward")) {
      w->Get("theta_opt_deg", &c.reward.theta_opt_deg);
      w->Get("theta_tol_deg", &c.reward.theta_tol_deg);
      w->Get("presence_min", &c.reward.presence_min);
      w->Get("presence_max", &c.reward.presence_max);
      w->Get("penalty", &c.reward.penalty);
      w->Finish();
    }
    if (auto d = r.Child("discount")) {
      d->Get("beta", &c.discount.beta);
      d->Get("alpha_min", &c.discount.alpha_min);
      d->Get("optimal_count", &c.discount.optimal_count);
      d->Finish();
    }
    if (auto f = r.Child("frame")) {
      f->Get("actor_height", &c.frame.actor_height);
      f->Get("focal_y", &c.frame.focal_y);
      f->Get("image_height", &c.frame.image_height);
      f->Finish();
    }
    if (auto q = r.Child("q")) {
      q->Get("learning_rate", &c.q.learning_rate);
      q->Get("discount", &c.q.discount);
      q->Get("epsilon", &c.q.epsilon);
      q->Get("height_scale", &c.q.height_scale);
      q->Finish();
    }
    r.Get("episodes", &c.episodes);
    r.Get("batch", &c.batch);
    r.Get("replay_capacity", &c.replay_capacity);
    r.Get("train_seed", &c.train_seed);
    r.Get("eval_seed", &c.eval_seed);
    r.Get("eval_episodes", &c.eval_episodes);
    r.Skip("scenario");  // parsed above
    r.Finish();
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("art: ") + e.what());
  }
  c.Validate();
  return c;
}

std::string ArtConfigToJson(const ArtConfig& c) {
  json scenario = json::parse(ScenarioToJson(c.scenario));
  scenario.erase("duration");
  json doc = {{"schema_version", kArtSchemaVersion},
              {"scenario", scenario},
              {"steps", c.steps},
              {"step_duration", c.step_duration},
              {"shot_rho", c.shot_rho},
              {"shot_theta", c.shot_theta},
              {"patch_spacing", c.patch_spacing},
              {"reward",
               {{"theta_opt_deg", c.reward.theta_opt_deg},
                {"theta_tol_deg", c.reward.theta_tol_deg},
                {"presence_min", c.reward.presence_min},
                {"presence_max", c.reward.presence_max},
                {"penalty", c.reward.penalty}}},
              {"discount",
               {{"beta", c.discount.beta},
                {"alpha_min", c.discount.alpha_min},
                {"optimal_count", c.discount.optimal_count}}},
              {"frame",
               {{"actor_height", c.frame.actor_height},
                {"focal_y", c.frame.focal_y},
                {"image_height", c.frame.image_height}}},
              {"q",
               {{"learning_rate", c.q.learning_rate},
                {"discount", c.q.discount},
                {"epsilon", c.q.epsilon},
                {"height_scale", c.q.height_scale}}},
              {"episodes", c.episodes},
              {"batch", c.batch},
              {"replay_capacity", c.replay_capacity},
              {"train_seed", c.train_seed},
              {"eval_seed", c.eval_seed},
              {"eval_episodes", c.eval_episodes}};
  return doc.dump(2) + "\n";
}

double ArtEpisode::MeanReward() const {
  if (steps.empty()) return 0.0;
  double sum = 0.0;
  for (const ArtStep& s : steps) sum += s.reward;
  return sum / steps.size();
}

ArtEpisode RunArtEpisode(const ArtConfig& config, std::uint64_t seed,
                         const ShotPolicy& policy) {
  ScenarioConfig scenario = config.scenario;
  scenario.seed = seed;
  scenario.duration = config.steps * config.step_duration;
  // The UAV starts on the initial context's shot.
  const ShotContext initial;
  scenario.planner.shot = ShotFor(config, static_cast<int>(initial.current));
  Simulation sim(scenario);

  ArtEpisode episode;
  episode.seed = seed;
  ShotContext ctx = ContextAt(config, sim, initial);
  for (int step = 0; step < config.steps; ++step) {
    const int action = policy(ctx);
    const ShotContext advanced = artistic::AdvanceShot(ctx, action);
    sim.SetShot(ShotFor(config, action));
    const std::size_t first = sim.trace().samples.size();
    sim.Advance(config.step_duration);

    std::vector<artistic::FrameSample> frames;
    bool crashed = false;
    const auto& samples = sim.trace().samples;
    for (std::size_t i = first; i < samples.size(); ++i) {
      const FlightSample& s = samples[i];
      frames.push_back(
          artistic::SynthesizeFrame(s.uav, s.actor, s.visible, config.frame));
      if (s.signed_distance < 0.0) crashed = true;
    }
    ArtStep result;
    result.action = action;
    result.frames = static_cast<int>(frames.size());
    result.step_reward = artistic::StepReward(frames, config.reward);
    result.alpha = artistic::DurationDiscount(advanced.count, config.discount);
    result.crashed = crashed;
    result.reward =
        artistic::ArtReward(result.step_reward, result.alpha, crashed);
    episode.steps.push_back(result);

    artistic::Transition t;
    t.context = ctx;
    t.action = action;
    t.reward = result.reward;
    t.terminal = step + 1 == config.steps;
    ctx = ContextAt(config, sim, advanced);
    t.next = ctx;
    episode.transitions.push_back(t);
  }
  return episode;
}

artistic::QFunction TrainPolicy(const ArtConfig& config, TrainLog* log) {
  config.Validate();
  artistic::QFunction q(config.q);
  artistic::ReplayBuffer buffer(config.replay_capacity);
  std::mt19937_64 explore_rng(DeriveSeed(config.train_seed, "art-explore"));
  std::mt19937_64 replay_rng(DeriveSeed(config.train_seed, "art-replay"));
  const std::uint64_t world_base = DeriveSeed(config.train_seed, "art-world");
  for (int e = 0; e < config.episodes; ++e) {
    // Each decision is learned from as soon as it is made.
    ArtEpisode episode =
        RunArtEpisode(config, world_base + static_cast<std::uint64_t>(e),
                      [&](const ShotContext& ctx) {
                        return artistic::SelectShot(q, ctx, true, explore_rng);
                      });
    for (const artistic::Transition& t : episode.transitions) {
      buffer.Add(t);
      artistic::QUpdate(&q, buffer, config.batch, replay_rng);
    }
    if (log) log->episodes.push_back(std::move(episode));
  }
  return q;
}

PolicyEvaluation EvaluatePolicy(const ArtConfig& config,
                                const artistic::QFunction& q) {
  config.Validate();
  PolicyEvaluation out;
  std::mt19937_64 rng(DeriveSeed(config.eval_seed, "art-random-policy"));
  std::uniform_int_distribution<int> uniform(0, artistic::kNumShots - 1);
  for (int e = 0; e < config.eval_episodes; ++e) {
    const std::uint64_t seed = config.eval_seed + static_cast<std::uint64_t>(e);
    out.greedy.push_back(RunArtEpisode(
        config, seed, [&](const ShotContext& ctx) { return q.Greedy(ctx); }));
    out.random.push_back(RunArtEpisode(
        config, seed, [&](const ShotContext&) { return uniform(rng); }));
  }
  out.greedy_mean = Mean(out.greedy);
  out.random_mean = Mean(out.random);
  return out;
}

void WriteEpisodeCsv(std::ostream& out, const std::vector<ArtEpisode>& log,
                     const std::string& label) {
  const auto precision = out.precision(10);
  out << "policy,episode,seed,step,shot,step_reward,alpha,crashed,reward\n";
  for (std::size_t e = 0; e < log.size(); ++e) {
    for (std::size_t i = 0; i < log[e].steps.size(); ++i) {
      const ArtStep& s = log[e].steps[i];
      out << label << "," << e << "," << log[e].seed << "," << i << ","
          << artistic::ToString(artistic::ShotFromIndex(s.action)) << ","
          << s.step_reward << "," << s.alpha << "," << (s.crashed ? 1 : 0)
          << "," << s.reward << "\n";
    }
  }
  out.precision(precision);
}

}  // namespace sim
}  // namespace skyframe
