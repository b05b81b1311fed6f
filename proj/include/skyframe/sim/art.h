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

#ifndef SKYFRAME_SIM_ART_H_
#define SKYFRAME_SIM_ART_H_

#include <cstdint>
#include <functional>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include "skyframe/artistic/artistic.h"
#include "skyframe/sim/scenario.h"

namespace skyframe {
namespace sim {

struct ArtConfig {
  // Closed-loop scenario each episode runs in; the seed is replaced per
  // episode and the shot yaw by the chosen shot type.
  ScenarioConfig scenario;
  int steps = 5;
  double step_duration = 6.0;  // s
  double shot_rho = 12.0;
  double shot_theta = 1.2217304763960306;  // 70 degrees from vertical
  double patch_spacing = 2.0;              // m between height samples
  artistic::RewardParams reward;
  artistic::DurationDiscountParams discount;
  artistic::FrameModel frame;
  artistic::QParams q;
  int episodes = 300;
  int batch = 32;
  std::size_t replay_capacity = 5000;
  std::uint64_t train_seed = 1;
  std::uint64_t eval_seed = 1000000;  // first held-out world seed
  int eval_episodes = 50;

  void Validate() const;
};

ArtConfig ArtConfigFromJson(const std::string& text);
std::string ArtConfigToJson(const ArtConfig& config);

// Maps a context to an action index.
using ShotPolicy = std::function<int(const artistic::ShotContext&)>;

struct ArtStep {
  int action = 0;
  double step_reward = 0.0;  // mean frame reward
  double alpha = 1.0;
  bool crashed = false;
  double reward = 0.0;  // after discount and crash override
  int frames = 0;
};

struct ArtEpisode {
  std::uint64_t seed = 0;
  std::vector<ArtStep> steps;
  std::vector<artistic::Transition> transitions;
  double MeanReward() const;
};

// Builds the scenario for `seed`, then for each step: reads the context,
// asks the policy for a shot, flies step_duration seconds with it,
// synthesizes one frame per flown metric sample and scores the step. A step
// crashes when any flown sample has negative clearance.
ArtEpisode RunArtEpisode(const ArtConfig& config, std::uint64_t seed,
                         const ShotPolicy& policy);

struct TrainLog {
  std::vector<ArtEpisode> episodes;
};

// Q-learning with experience replay: epsilon-greedy episodes on world seeds
// derived from train_seed, one replay batch per decision step.
artistic::QFunction TrainPolicy(const ArtConfig& config, TrainLog* log);

struct PolicyEvaluation {
  double greedy_mean = 0.0;  // mean per-step reward
  double random_mean = 0.0;
  std::vector<ArtEpisode> greedy;
  std::vector<ArtEpisode> random;
};

// Greedy `q` against the uniform random policy on eval_episodes held-out
// world seeds starting at eval_seed.
PolicyEvaluation EvaluatePolicy(const ArtConfig& config,
                                const artistic::QFunction& q);

// One row per step: policy (`label`), episode, seed, step, shot,
// step_reward, alpha, crashed, reward.
void WriteEpisodeCsv(std::ostream& out, const std::vector<ArtEpisode>& log,
                     const std::string& label = "");

}  // namespace sim
}  // namespace skyframe

#endif  // SKYFRAME_SIM_ART_H_
