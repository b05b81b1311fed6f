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

#ifndef SKYFRAME_ARTISTIC_ARTISTIC_H_
#define SKYFRAME_ARTISTIC_ARTISTIC_H_

#include <array>
#include <cstdint>
#include <deque>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "Eigen/Core"
#include "skyframe/core/types.h"
#include "skyframe/mapping/height_map.h"

namespace skyframe {
namespace artistic {

// Shot types in action-index order.
enum class ShotType : int { kLeft = 0, kRight = 1, kFront = 2, kBack = 3 };
inline constexpr int kNumShots = 4;

std::string ToString(ShotType shot);
ShotType ShotFromIndex(int index);

// Relative camera yaw for each shot type: left pi/2, right -pi/2, front 0,
// back pi.
double ShotYaw(ShotType shot);

struct FrameSample {
  double tilt_deg = 0.0;        // camera elevation above the actor, degrees
  double presence_ratio = 0.0;  // actor height as a fraction of image height
  bool visible = false;
};

struct RewardParams {
  double theta_opt_deg = 15.0;
  double theta_tol_deg = 10.0;
  double presence_min = 0.05;
  double presence_max = 0.10;
  double penalty = -0.5;
};

// 1 at theta_opt, falling linearly to 0 at theta_opt +- theta_tol, and
// `penalty` beyond. Frames that are not visible or whose presence ratio is
// outside [presence_min, presence_max] score `penalty`.
double FrameReward(const FrameSample& frame, const RewardParams& params = {});

// Mean frame reward; `penalty` for an empty list.
double StepReward(std::span<const FrameSample> frames,
                  const RewardParams& params = {});

struct DurationDiscountParams {
  double beta = 0.15;
  double alpha_min = 0.1;
  int optimal_count = 2;
};

// alpha(c) = max(alpha_min, 1 - beta (c - c_opt)^2). Throws for c < 1.
double DurationDiscount(int count, const DurationDiscountParams& params = {});

// Crash overrides to -1. Otherwise r * alpha when r >= 0 and r / alpha when
// r < 0. Throws unless alpha lies in (0, 1].
double ArtReward(double step_reward, double alpha, bool crashed);

// Geometry of the synthetic frames.
struct FrameModel {
  double actor_height = 1.8;  // m
  double focal_y = 240.0;     // px
  int image_height = 480;     // px
};

// Frame seen from `camera` looking at an actor standing at `actor_foot`.
// Tilt is the elevation of the camera above the actor's center; presence
// ratio is actor_height * f_y / (distance * image_height), or 0 when the
// actor is not visible.
FrameSample SynthesizeFrame(const WorldPoint& camera,
                            const WorldPoint& actor_foot, bool visible,
                            const FrameModel& model = {});

inline constexpr int kPatchSize = 9;
using HeightPatch = Eigen::Matrix<double, kPatchSize, kPatchSize>;

struct ShotContext {
  HeightPatch patch = HeightPatch::Zero();  // relative elevation, m
  ShotType current = ShotType::kBack;
  int count = 1;
};

// Elevation around the actor relative to the ground under it, sampled on a
// heading-aligned 9x9 lattice with `spacing` meters between samples. Row r
// runs along the heading (row 4 is the actor), column k to the actor's left.
HeightPatch SampleHeightPatch(const mapping::HeightMap& terrain,
                              const Pose& actor, double spacing);

// Fixed feature map: 81 patch heights scaled by 1/height_scale and clipped
// to [-1, 1], a one-hot current shot, count / 5, the one-hot current shot
// scaled by count / 5, and a constant 1.
inline constexpr int kNumFeatures = kPatchSize * kPatchSize + 4 + 1 + 4 + 1;
using Features = Eigen::Matrix<double, kNumFeatures, 1>;
Features ContextFeatures(const ShotContext& context,
                         double height_scale = 10.0);

struct QParams {
  double learning_rate = 0.1;
  double discount = 0.9;
  double epsilon = 0.1;
  double height_scale = 10.0;
};

// Linear action values: Q(c, a) = w_a . features(c).
class QFunction {
 public:
  explicit QFunction(const QParams& params = {});

  const QParams& params() const { return params_; }
  QParams& mutable_params() { return params_; }
  double Value(const ShotContext& context, int action) const;
  std::array<double, kNumShots> Values(const ShotContext& context) const;
  // argmax over actions; ties go to the lowest index.
  int Greedy(const ShotContext& context) const;

  // Normalized least-mean-squares step toward `target`: with a learning
  // rate of 1 the new Q(c, a) equals the target.
  void Update(const ShotContext& context, int action, double target);

  const Eigen::Matrix<double, kNumShots, kNumFeatures>& weights() const {
    return weights_;
  }
  Eigen::Matrix<double, kNumShots, kNumFeatures>& mutable_weights() {
    return weights_;
  }

  std::string ToJson() const;
  static QFunction FromJson(const std::string& text);

 private:
  QParams params_;
  Eigen::Matrix<double, kNumShots, kNumFeatures> weights_;
};

struct Transition {
  ShotContext context;
  int action = 0;
  double reward = 0.0;
  ShotContext next;
  bool terminal = false;
};

// Bounded FIFO of transitions.
class ReplayBuffer {
 public:
  explicit ReplayBuffer(std::size_t capacity);
  void Add(const Transition& t);
  std::size_t size() const { return items_.size(); }
  std::size_t capacity() const { return capacity_; }
  const Transition& at(std::size_t i) const { return items_[i]; }

 private:
  std::size_t capacity_;
  std::deque<Transition> items_;
};

// epsilon-greedy when `explore`, greedy otherwise.
int SelectShot(const QFunction& q, const ShotContext& context, bool explore,
               std::mt19937_64& rng);

// Draws `batch` transitions uniformly with replacement and moves each
// Q(c, a) toward r + discount * max_a' Q(c', a') (r alone when terminal).
// No-op on an empty buffer.
void QUpdate(QFunction* q, const ReplayBuffer& buffer, int batch,
             std::mt19937_64& rng);

// Context after taking `action` from `context`: the count grows when the
// shot repeats and resets to 1 otherwise. The patch is left unchanged.
ShotContext AdvanceShot(const ShotContext& context, int action);

}  // namespace artistic
}  // namespace skyframe

#endif  // SKYFRAME_ARTISTIC_ARTISTIC_H_
