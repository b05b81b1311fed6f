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

#include "skyframe/artistic/artistic.h"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "json.hpp"

namespace skyframe {
namespace artistic {

std::string ToString(ShotType shot) {
  switch (shot) {
    case ShotType::kLeft:
      return "left";
    case ShotType::kRight:
      return "right";
    case ShotType::kFront:
      return "front";
    case ShotType::kBack:
      return "back";
  }
  return "unknown";
}

ShotType ShotFromIndex(int index) {
  if (index < 0 || index >= kNumShots) {
    throw InvalidArgument("shot index out of range: " + std::to_string(index));
  }
  return static_cast<ShotType>(index);
}

double ShotYaw(ShotType shot) {
  constexpr double kPi = std::numbers::pi;
  switch (shot) {
    case ShotType::kLeft:
      return kPi / 2;
    case ShotType::kRight:
      return -kPi / 2;
    case ShotType::kFront:
      return 0.0;
    case ShotType::kBack:
      return kPi;
  }
  return 0.0;
}

double FrameReward(const FrameSample& frame, const RewardParams& params) {
  if (!frame.visible || !(frame.presence_ratio >= params.presence_min) ||
      !(frame.presence_ratio <= params.presence_max)) {
    return params.penalty;
  }
  const double off = std::abs(frame.tilt_deg - params.theta_opt_deg);
  if (!(off <= params.theta_tol_deg)) return params.penalty;
  return 1.0 - off / params.theta_tol_deg;
}

double StepReward(std::span<const FrameSample> frames,
                  const RewardParams& params) {
  if (frames.empty()) return params.penalty;
  double sum = 0.0;
  for (const FrameSample& f : frames) sum += FrameReward(f, params);
  return sum / static_cast<double>(frames.size());
}

double DurationDiscount(int count, const DurationDiscountParams& params) {
  if (count < 1) throw InvalidArgument("DurationDiscount: count must be >= 1");
  const double d = count - params.optimal_count;
  return std::max(params.alpha_min, 1.0 - params.beta * d * d);
}

double ArtReward(double step_reward, double alpha, bool crashed) {
  if (crashed) return -1.0;
  if (!(alpha > 0.0) || !(alpha <= 1.0)) {
    throw InvalidArgument("ArtReward: alpha must lie in (0, 1]");
  }
  return step_reward >= 0.0 ? step_reward * alpha : step_reward / alpha;
}

FrameSample SynthesizeFrame(const WorldPoint& camera,
                            const WorldPoint& actor_foot, bool visible,
                            const FrameModel& model) {
  const WorldPoint center =
      actor_foot + Eigen::Vector3d(0.0, 0.0, 0.5 * model.actor_height);
  const Eigen::Vector3d d = camera - center;
  const double horizontal = d.head<2>().norm();
  FrameSample frame;
  frame.tilt_deg = std::atan2(d.z(), horizontal) * 180.0 / std::numbers::pi;
  frame.visible = visible;
  const double distance = d.norm();
  frame.presence_ratio =
      visible && distance > 0.0
          ? model.actor_height * model.focal_y / (distance * model.image_height)
          : 0.0;
  return frame;
}

HeightPatch SampleHeightPatch(const mapping::HeightMap& terrain,
                              const Pose& actor, double spacing) {
  const double c = std::cos(actor.heading);
  const double s = std::sin(actor.heading);
  const double ground =
      terrain.HeightAt(actor.position.x(), actor.position.y());
  const int half = kPatchSize / 2;
  HeightPatch patch;
  for (int r = 0; r < kPatchSize; ++r) {
    for (int k = 0; k < kPatchSize; ++k) {
      const double ahead = (r - half) * spacing;
      const double left = (k - half) * spacing;
      const double x = actor.position.x() + ahead * c - left * s;
      const double y = actor.position.y() + ahead * s + left * c;
      patch(r, k) = terrain.HeightAt(x, y) - ground;
    }
  }
  return patch;
}

Features ContextFeatures(const ShotContext& context, double height_scale) {
  Features f = Features::Zero();
  int i = 0;
  for (int r = 0; r < kPatchSize; ++r) {
    for (int k = 0; k < kPatchSize; ++k) {
      f[i++] = std::clamp(context.patch(r, k) / height_scale, -1.0, 1.0);
    }
  }
  const int shot = static_cast<int>(context.current);
  const double count = context.count / 5.0;
  f[i + shot] = 1.0;
  i += kNumShots;
  f[i++] = count;
  f[i + shot] = count;
  i += kNumShots;
  f[i] = 1.0;
  return f;
}

QFunction::QFunction(const QParams& params)
    : params_(params),
      weights_(Eigen::Matrix<double, kNumShots, kNumFeatures>::Zero()) {}

double QFunction::Value(const ShotContext& context, int action) const {
  ShotFromIndex(action);
  return weights_.row(action).dot(
      ContextFeatures(context, params_.height_scale));
}

std::array<double, kNumShots> QFunction::Values(
    const ShotContext& context) const {
  const Features f = ContextFeatures(context, params_.height_scale);
  std::array<double, kNumShots> out;
  for (int a = 0; a < kNumShots; ++a) out[a] = weights_.row(a).dot(f);
  return out;
}

int QFunction::Greedy(const ShotContext& context) const {
  const auto values = Values(context);
  int best = 0;
  for (int a = 1; a < kNumShots; ++a) {
    if (values[a] > values[best]) best = a;
  }
  return best;
}

void QFunction::Update(const ShotContext& context, int action, double target) {
  ShotFromIndex(action);
  const Features f = ContextFeatures(context, params_.height_scale);
  const double error = target - weights_.row(action).dot(f);
  weights_.row(action) +=
      (params_.learning_rate * error / f.squaredNorm()) * f.transpose();
}

std::string QFunction::ToJson() const {
  nlohmann::json j;
  j["learning_rate"] = params_.learning_rate;
  j["discount"] = params_.discount;
  j["epsilon"] = params_.epsilon;
  j["height_scale"] = params_.height_scale;
  j["num_features"] = kNumFeatures;
  nlohmann::json rows = nlohmann::json::array();
  for (int a = 0; a < kNumShots; ++a) {
    std::vector<double> row(weights_.cols());
    for (int k = 0; k < weights_.cols(); ++k) row[k] = weights_(a, k);
    rows.push_back(row);
  }
  j["weights"] = rows;
  return j.dump(2);
}

QFunction QFunction::FromJson(const std::string& text) {
  const nlohmann::json j = nlohmann::json::parse(text);
  QParams p;
  p.learning_rate = j.at("learning_rate").get<double>();
  p.discount = j.at("discount").get<double>();
  p.epsilon = j.at("epsilon").get<double>();
  p.height_scale = j.at("height_scale").get<double>();
  if (j.at("num_features").get<int>() != kNumFeatures) {
    throw InvalidArgument("QFunction: feature count mismatch");
  }
  QFunction q(p);
  const auto& rows = j.at("weights");
  if (rows.size() != kNumShots) {
    throw InvalidArgument("QFunction: expected one weight row per shot");
  }
  for (int a = 0; a < kNumShots; ++a) {
    const auto row = rows[a].get<std::vector<double>>();
    if (static_cast<int>(row.size()) != kNumFeatures) {
      throw InvalidArgument("QFunction: weight row has the wrong length");
    }
    for (int k = 0; k < kNumFeatures; ++k) q.weights_(a, k) = row[k];
  }
  return q;
}

ReplayBuffer::ReplayBuffer(std::size_t capacity) : capacity_(capacity) {
  if (capacity == 0) throw InvalidArgument("ReplayBuffer: capacity is zero");
}

void ReplayBuffer::Add(const Transition& t) {
  if (items_.size() == capacity_) items_.pop_front();
  items_.push_back(t);
}

int SelectShot(const QFunction& q, const ShotContext& context, bool explore,
               std::mt19937_64& rng) {
  if (explore) {
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    if (coin(rng) < q.params().epsilon) {
      std::uniform_int_distribution<int> pick(0, kNumShots - 1);
      return pick(rng);
    }
  }
  return q.Greedy(context);
}

void QUpdate(QFunction* q, const ReplayBuffer& buffer, int batch,
             std::mt19937_64& rng) {
  if (buffer.size() == 0 || batch <= 0) return;
  std::uniform_int_distribution<std::size_t> pick(0, buffer.size() - 1);
  for (int b = 0; b < batch; ++b) {
    const Transition& t = buffer.at(pick(rng));
    double target = t.reward;
    if (!t.terminal) {
      const auto next = q->Values(t.next);
      target +=
          q->params().discount * *std::max_element(next.begin(), next.end());
    }
    q->Update(t.context, t.action, target);
  }
}

ShotContext AdvanceShot(const ShotContext& context, int action) {
  ShotContext next = context;
  const ShotType shot = ShotFromIndex(action);
  next.count = shot == context.current ? context.count + 1 : 1;
  next.current = shot;
  return next;
}

}  // namespace artistic
}  // namespace skyframe
