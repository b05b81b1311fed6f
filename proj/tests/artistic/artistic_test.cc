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

#include <cmath>
#include <numbers>
#include <random>

#include "gtest/gtest.h"

namespace skyframe {
namespace artistic {
namespace {

constexpr double kPi = std::numbers::pi;

TEST(FrameRewardTest, PaperExamples) {
  EXPECT_DOUBLE_EQ(FrameReward({15.0, 0.07, true}), 1.0);
  EXPECT_DOUBLE_EQ(FrameReward({25.0, 0.07, true}), 0.0);
  EXPECT_DOUBLE_EQ(FrameReward({15.0, 0.20, true}), -0.5);
}

TEST(FrameRewardTest, BranchValues) {
  EXPECT_DOUBLE_EQ(FrameReward({5.0, 0.07, true}), 0.0);
  EXPECT_DOUBLE_EQ(FrameReward({20.0, 0.07, true}), 0.5);
  EXPECT_DOUBLE_EQ(FrameReward({10.0, 0.07, true}), 0.5);
  EXPECT_DOUBLE_EQ(FrameReward({25.0001, 0.07, true}), -0.5);
  EXPECT_DOUBLE_EQ(FrameReward({4.9999, 0.07, true}), -0.5);
  EXPECT_DOUBLE_EQ(FrameReward({15.0, 0.07, false}), -0.5);
  EXPECT_DOUBLE_EQ(FrameReward({15.0, 0.049, true}), -0.5);
  EXPECT_DOUBLE_EQ(FrameReward({15.0, 0.05, true}), 1.0);
  EXPECT_DOUBLE_EQ(FrameReward({15.0, 0.10, true}), 1.0);
}

TEST(FrameRewardTest, ContinuousInsideTolerance) {
  for (double t = 5.0; t < 25.0; t += 0.01) {
    const double a = FrameReward({t, 0.07, true});
    const double b = FrameReward({t + 1e-7, 0.07, true});
    EXPECT_NEAR(a, b, 1e-6);
  }
}

TEST(StepRewardTest, MeansAndEmpty) {
  const std::vector<FrameSample> good(10, FrameSample{15.0, 0.07, true});
  EXPECT_DOUBLE_EQ(StepReward(good), 1.0);
  std::vector<FrameSample> half = good;
  for (int i = 0; i < 5; ++i) half[i].visible = false;
  EXPECT_DOUBLE_EQ(StepReward(half), 0.25);
  EXPECT_DOUBLE_EQ(StepReward({}), -0.5);

  std::mt19937 rng(3);
  std::uniform_real_distribution<double> tilt(-10.0, 40.0);
  std::uniform_real_distribution<double> pr(0.0, 0.15);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<FrameSample> frames(1 + trial);
    double sum = 0.0;
    for (auto& f : frames) {
      f = {tilt(rng), pr(rng), (trial + static_cast<int>(sum * 7)) % 3 != 0};
      sum += FrameReward(f);
    }
    EXPECT_NEAR(StepReward(frames), sum / frames.size(), 1e-12);
  }
}

TEST(DurationDiscountTest, DeclaredShape) {
  EXPECT_DOUBLE_EQ(DurationDiscount(2), 1.0);
  EXPECT_DOUBLE_EQ(DurationDiscount(1), 0.85);
  EXPECT_DOUBLE_EQ(DurationDiscount(3), 0.85);
  EXPECT_NEAR(DurationDiscount(4), 0.4, 1e-12);
  EXPECT_DOUBLE_EQ(DurationDiscount(6), 0.1);
  EXPECT_DOUBLE_EQ(DurationDiscount(50), 0.1);
  EXPECT_THROW(DurationDiscount(0), InvalidArgument);
}

TEST(ArtRewardTest, BranchesAndCrash) {
  EXPECT_DOUBLE_EQ(ArtReward(0.5, 0.5, false), 0.25);
  EXPECT_DOUBLE_EQ(ArtReward(-0.5, 0.5, false), -1.0);
  EXPECT_DOUBLE_EQ(ArtReward(0.9, 0.3, true), -1.0);
  EXPECT_DOUBLE_EQ(ArtReward(-0.2, 1.0, true), -1.0);
  // Both branches meet at zero.
  for (double alpha : {0.1, 0.4, 0.85, 1.0}) {
    EXPECT_EQ(ArtReward(0.0, alpha, false), 0.0);
    EXPECT_NEAR(ArtReward(-1e-12, alpha, false), 0.0, 1e-10);
    EXPECT_NEAR(ArtReward(1e-12, alpha, false), 0.0, 1e-10);
  }
  EXPECT_THROW(ArtReward(0.5, 0.0, false), InvalidArgument);
  EXPECT_THROW(ArtReward(0.5, 1.5, false), InvalidArgument);
}

TEST(ArtRewardTest, MonotoneInStepReward) {
  for (double alpha : {0.1, 0.55, 1.0}) {
    double prev = ArtReward(-1.0, alpha, false);
    for (double r = -1.0; r <= 1.0; r += 0.01) {
      const double v = ArtReward(r, alpha, false);
      EXPECT_GE(v, prev);
      prev = v;
    }
  }
}

TEST(ShotTest, YawsAndIndices) {
  EXPECT_DOUBLE_EQ(ShotYaw(ShotType::kLeft), kPi / 2);
  EXPECT_DOUBLE_EQ(ShotYaw(ShotType::kRight), -kPi / 2);
  EXPECT_DOUBLE_EQ(ShotYaw(ShotType::kFront), 0.0);
  EXPECT_DOUBLE_EQ(ShotYaw(ShotType::kBack), kPi);
  EXPECT_EQ(ShotFromIndex(2), ShotType::kFront);
  EXPECT_THROW(ShotFromIndex(4), InvalidArgument);
  EXPECT_EQ(ToString(ShotType::kRight), "right");
}

TEST(SynthesizeFrameTest, TiltAndPresence) {
  const FrameModel model;
  const WorldPoint foot(0, 0, 0);
  const double dist = 12.0;
  const double elev = 15.0 * kPi / 180.0;
  const WorldPoint cam =
      foot + Eigen::Vector3d(0, 0, 0.9) +
      dist * Eigen::Vector3d(std::cos(elev), 0, std::sin(elev));
  const FrameSample f = SynthesizeFrame(cam, foot, true, model);
  EXPECT_NEAR(f.tilt_deg, 15.0, 1e-9);
  EXPECT_NEAR(f.presence_ratio, 1.8 * 240.0 / (12.0 * 480.0), 1e-12);
  EXPECT_DOUBLE_EQ(FrameReward(f), FrameReward({15.0, f.presence_ratio, true}));
  EXPECT_EQ(SynthesizeFrame(cam, foot, false, model).presence_ratio, 0.0);
}

TEST(HeightPatchTest, HeadingAlignedSampling) {
  mapping::HeightMap terrain(Eigen::Vector2d(-20, -20), 1.0, 40, 40);
  // A tall block at world (5, 0).
  for (int x = 24; x < 26; ++x) {
    for (int y = 19; y < 21; ++y) terrain.SetCell(x, y, 6.0);
  }
  // Heading +x: the block is 5 m ahead, row 4 + 5/spacing.
  HeightPatch p =
      SampleHeightPatch(terrain, {WorldPoint(0.1, 0.1, 0), 0.0}, 1.25);
  EXPECT_DOUBLE_EQ(p(8, 4), 6.0);
  EXPECT_DOUBLE_EQ(p(4, 4), 0.0);
  // Heading +y: the same block is to the actor's right (negative left).
  p = SampleHeightPatch(terrain, {WorldPoint(0.1, 0.1, 0), kPi / 2}, 1.25);
  EXPECT_DOUBLE_EQ(p(4, 0), 6.0);
  EXPECT_DOUBLE_EQ(p(8, 4), 0.0);
}

TEST(ContextFeaturesTest, Layout) {
  ShotContext c;
  c.patch(0, 0) = 25.0;
  c.patch(8, 8) = -3.0;
  c.current = ShotType::kFront;
  c.count = 3;
  const Features f = ContextFeatures(c, 10.0);
  EXPECT_DOUBLE_EQ(f[0], 1.0);
  EXPECT_DOUBLE_EQ(f[80], -0.3);
  EXPECT_DOUBLE_EQ(f[81 + 2], 1.0);
  EXPECT_DOUBLE_EQ(f[81 + 0], 0.0);
  EXPECT_DOUBLE_EQ(f[85], 0.6);
  EXPECT_DOUBLE_EQ(f[86 + 2], 0.6);
  EXPECT_DOUBLE_EQ(f[86 + 1], 0.0);
  EXPECT_DOUBLE_EQ(f[kNumFeatures - 1], 1.0);
}

TEST(SelectShotTest, GreedyAndTieBreak) {
  QFunction q;
  ShotContext c;
  std::mt19937_64 rng(1);
  EXPECT_EQ(SelectShot(q, c, false, rng), 0);
  const double values[4] = {0.1, 0.9, 0.2, 0.0};
  for (int a = 0; a < 4; ++a) {
    q.mutable_weights()(a, kNumFeatures - 1) = values[a];
  }
  EXPECT_EQ(SelectShot(q, c, false, rng), 1);
  q.mutable_params().epsilon = 0.0;
  EXPECT_EQ(SelectShot(q, c, true, rng), 1);
}

TEST(SelectShotTest, FullExplorationIsUniform) {
  QParams p;
  p.epsilon = 1.0;
  const QFunction q(p);
  std::mt19937_64 rng(1234);
  std::array<int, 4> counts{};
  const int n = 10000;
  for (int i = 0; i < n; ++i) ++counts[SelectShot(q, ShotContext{}, true, rng)];
  double chi2 = 0.0;
  for (int c : counts) chi2 += (c - n / 4.0) * (c - n / 4.0) / (n / 4.0);
  // 3 degrees of freedom, 0.1% upper tail.
  EXPECT_LT(chi2, 16.27);
}

TEST(QUpdateTest, UnitRateZeroDiscountHitsReward) {
  QParams p;
  p.learning_rate = 1.0;
  p.discount = 0.0;
  QFunction q(p);
  ReplayBuffer buffer(4);
  ShotContext c;
  c.patch(2, 3) = 4.0;
  c.count = 2;
  buffer.Add({c, 2, 0.731, c, false});
  std::mt19937_64 rng(9);
  QUpdate(&q, buffer, 1, rng);
  EXPECT_NEAR(q.Value(c, 2), 0.731, 1e-12);
}

TEST(QUpdateTest, EmptyBufferIsNoOp) {
  QFunction q;
  q.mutable_weights().setConstant(0.3);
  const auto before = q.weights();
  ReplayBuffer buffer(3);
  std::mt19937_64 rng(1);
  QUpdate(&q, buffer, 8, rng);
  EXPECT_EQ(q.weights(), before);
}

TEST(QUpdateTest, TwoStateChainConvergesToValueIteration) {
  // s0 --a--> s1 --a--> end. Rewards depend on the state and action.
  QParams p;
  p.learning_rate = 0.5;
  p.discount = 0.8;
  QFunction q(p);
  ShotContext s0;
  s0.current = ShotType::kLeft;
  ShotContext s1;
  s1.current = ShotType::kBack;
  s1.count = 3;
  s1.patch.setConstant(2.0);
  const double r0[4] = {0.2, -0.1, 0.5, 0.0};
  const double r1[4] = {1.0, 0.3, -0.4, 0.6};
  ReplayBuffer buffer(16);
  for (int a = 0; a < 4; ++a) {
    buffer.Add({s0, a, r0[a], s1, false});
    buffer.Add({s1, a, r1[a], s1, true});
  }
  std::mt19937_64 rng(77);
  for (int it = 0; it < 4000; ++it) QUpdate(&q, buffer, 8, rng);

  // Value iteration oracle.
  const double v1 = *std::max_element(r1, r1 + 4);
  for (int a = 0; a < 4; ++a) {
    EXPECT_NEAR(q.Value(s1, a), r1[a], 1e-3);
    EXPECT_NEAR(q.Value(s0, a), r0[a] + 0.8 * v1, 1e-3);
  }
}

TEST(QUpdateTest, SeededUpdatesAreReproducible) {
  auto train = [] {
    QFunction q;
    ReplayBuffer buffer(50);
    std::mt19937 gen(5);
    std::normal_distribution<double> n(0.0, 1.0);
    for (int i = 0; i < 50; ++i) {
      ShotContext c;
      c.patch.setConstant(n(gen));
      c.count = 1 + i % 4;
      buffer.Add({c, i % 4, n(gen), c, i % 5 == 0});
    }
    std::mt19937_64 rng(11);
    for (int i = 0; i < 100; ++i) QUpdate(&q, buffer, 16, rng);
    return q.weights();
  };
  EXPECT_EQ(train(), train());
}

TEST(ReplayBufferTest, BoundedFifo) {
  ReplayBuffer buffer(3);
  for (int i = 0; i < 5; ++i) {
    Transition t;
    t.reward = i;
    buffer.Add(t);
    EXPECT_LE(buffer.size(), 3u);
  }
  EXPECT_EQ(buffer.at(0).reward, 2.0);
  EXPECT_EQ(buffer.at(2).reward, 4.0);
  EXPECT_THROW(ReplayBuffer(0), InvalidArgument);
}

TEST(QFunctionTest, JsonRoundTrip) {
  QParams p;
  p.learning_rate = 0.25;
  p.discount = 0.7;
  QFunction q(p);
  std::mt19937 gen(2);
  std::normal_distribution<double> n(0.0, 1.0);
  for (int a = 0; a < kNumShots; ++a) {
    for (int k = 0; k < kNumFeatures; ++k) q.mutable_weights()(a, k) = n(gen);
  }
  const QFunction back = QFunction::FromJson(q.ToJson());
  EXPECT_EQ(back.weights(), q.weights());
  EXPECT_EQ(back.params().discount, 0.7);
  EXPECT_THROW(QFunction::FromJson("{}"), std::exception);
}

TEST(AdvanceShotTest, CountsRepeats) {
  ShotContext c;
  c.current = ShotType::kBack;
  c.count = 2;
  EXPECT_EQ(AdvanceShot(c, 3).count, 3);
  const ShotContext d = AdvanceShot(c, 0);
  EXPECT_EQ(d.count, 1);
  EXPECT_EQ(d.current, ShotType::kLeft);
}

}  // namespace
}  // namespace artistic
}  // namespace skyframe
