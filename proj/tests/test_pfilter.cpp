/*
 *  Copyright (C) 2026 The magvox Authors
 *
 *  SPDX-License-Identifier: Apache-2.0
 *  See the file LICENSE.txt for more information.
 */

#include "magvox/harness.hpp"
#include "magvox/pfilter.hpp"
#include "magvox/simgen.hpp"

#include <algorithm>
#include <numeric>
#include <random>

#include <gtest/gtest.h>

using namespace magvox;

namespace
{
/// Forearm (WRF X) pointing straight down, hinge horizontal.
Rotationd forearmDown()
{
  return Rotationd::axisAngle(Vec3::UnitY(), std::numbers::pi / 2);
}

double weightSum(const ParticleSet& set)
{
  return std::accumulate(set.particles.begin(), set.particles.end(), 0.0,
                         [](double acc, const Particle& p) { return acc + p.weight; });
}
} // namespace

TEST(ReachableSet, StraightArmDownIsUnique)
{
  ArmModel arm;
  arm.shoulder = Vec3(0.1, -0.2, 1.4);
  arm.flexion_min = 0.0;
  arm.flexion_max = 0.0;
  ASSERT_LT((forearmDown().apply(Vec3::UnitX()) - Vec3(0, 0, -1)).norm(), 1e-12);
  for (const Vec3& w : reachableSet(forearmDown(), arm, 20, 1))
    EXPECT_LT((w - (arm.shoulder - Vec3(0, 0, 0.57))).norm(), 1e-9);
}

TEST(ReachableSet, HorizontalForearmSatisfiesSegmentConstraints)
{
  const ArmModel arm;
  const Rotationd theta = Rotationd::axisAngle(Vec3::UnitZ(), 0.4);
  const Vec3 forearm = theta.apply(Vec3::UnitX());
  const Vec3 hinge = theta.apply(Vec3::UnitY());
  const std::vector<Vec3> wrists = reachableSet(theta, arm, 500, 2);
  ASSERT_EQ(wrists.size(), 500u);
  double spread = 0.0;
  for (const Vec3& w : wrists)
  {
    const Vec3 elbow = w - arm.forearm_len * forearm;
    EXPECT_NEAR((elbow - arm.shoulder).norm(), arm.upper_arm_len, 1e-9);
    EXPECT_NEAR((elbow - arm.shoulder).dot(hinge), 0.0, 1e-9);
    EXPECT_LE((w - arm.shoulder).norm(), arm.reach() + 1e-9);
    spread = std::max(spread, (w - wrists.front()).norm());
  }
  // The samples cover an arc rather than a single point.
  EXPECT_GT(spread, 0.1);
}

TEST(ReachableSet, SingleSampleIsDeterministic)
{
  const ArmModel arm;
  const Rotationd theta = Rotationd::axisAngle(Vec3::UnitZ(), -0.3);
  const std::vector<Vec3> a = reachableSet(theta, arm, 1, 77);
  const std::vector<Vec3> b = reachableSet(theta, arm, 1, 77);
  ASSERT_EQ(a.size(), 1u);
  EXPECT_EQ(a.front(), b.front());
  EXPECT_THROW(reachableSet(theta, arm, 0, 1), ConfigError);
}

TEST(ReachableSet, ImpossiblePoseIsRejected)
{
  ArmModel arm;
  arm.flexion_min = 0.0;
  arm.flexion_max = 0.0;
  arm.max_elevation = deg2rad(10.0);
  // Straight arm pointing up would lift the elbow far above the limit.
  const Rotationd up = Rotationd::axisAngle(Vec3::UnitY(), -std::numbers::pi / 2);
  EXPECT_THROW(reachableSet(up, arm, 5, 1), InfeasiblePose);
}

TEST(FlexionRange, SampleAndClampStayInside)
{
  const ArmModel arm;
  const FlexionRange range(Rotationd::axisAngle(Vec3::UnitZ(), 0.2), arm);
  ASSERT_FALSE(range.intervals().empty());
  const double lo = range.intervals().front().first;
  const double hi = range.intervals().back().second;
  for (double u = 0.0; u < 1.0; u += 0.01)
  {
    const double f = range.sample(u);
    EXPECT_GE(f, lo - 1e-12);
    EXPECT_LE(f, hi + 1e-12);
  }
  EXPECT_EQ(range.clamp(-5.0), lo);
  EXPECT_EQ(range.clamp(50.0), hi);
}

TEST(FlexionRange, MoveReflectsAtTheLimits)
{
  ArmModel arm;
  arm.max_elevation = deg2rad(90.0);
  const FlexionRange range(Rotationd::axisAngle(Vec3::UnitY(), std::numbers::pi / 2), arm);
  ASSERT_EQ(range.intervals().size(), 1u);
  const auto [a, b] = range.intervals().front();
  EXPECT_NEAR(range.move(a + 0.1, -0.3), a + 0.2, 1e-12);
  EXPECT_NEAR(range.move(b - 0.1, 0.3), b - 0.2, 1e-12);
  EXPECT_NEAR(range.move(a + 0.5, 0.25), a + 0.75, 1e-12);

  // A uniform cloud stays uniform under the walk.
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::normal_distribution<double> step(0.0, 0.3);
  std::vector<int> bins(10, 0);
  const int n = 200000;
  for (int i = 0; i < n; ++i)
  {
    const double f = range.move(range.sample(u(rng)), step(rng));
    ASSERT_GE(f, a);
    ASSERT_LE(f, b);
    bins[std::min<std::size_t>(9, static_cast<std::size_t>((f - a) / (b - a) * 10.0))] += 1;
  }
  for (int c : bins)
    EXPECT_NEAR(c, n / 10, n / 100);
}

TEST(PredictedAcceleration, Examples)
{
  Particle p;
  p.push(Vec3(0, 0, 0));
  EXPECT_THROW(predictedAcceleration(p, 0.1), IncompleteHistory);
  p.push(Vec3(0.01, 0, 0));
  p.push(Vec3(0.02, 0, 0));
  EXPECT_LT(predictedAcceleration(p, 0.1).norm(), 1e-12);

  Particle q;
  q.push(Vec3::Zero());
  q.push(Vec3::Zero());
  q.push(Vec3(0, 0.003, 0));
  EXPECT_LT((predictedAcceleration(q, 0.1) - Vec3(0, 0.3, 0)).norm(), 1e-12);
  EXPECT_LT((predictedAcceleration(q, 0.02) - Vec3(0, 7.5, 0)).norm(), 1e-12);

  PfConfig five;
  PfConfig one;
  one.K_pf = 1;
  EXPECT_NEAR(1.0 / (five.effectiveInterval() * five.effectiveInterval()), 100.0, 1e-9);
  EXPECT_NEAR(1.0 / (one.effectiveInterval() * one.effectiveInterval()), 2500.0, 1e-9);
}

TEST(EstimateLocation, WeightedMean)
{
  ParticleSet single;
  single.particles.resize(1);
  single.particles[0].push(Vec3(0.1, 0.2, 0.3));
  single.particles[0].weight = 1.0;
  EXPECT_EQ(estimateLocation(single), Vec3(0.1, 0.2, 0.3));

  ParticleSet two;
  two.particles.resize(2);
  two.particles[0].push(Vec3(0, 0, 0));
  two.particles[1].push(Vec3(1, 2, 3));
  two.particles[0].weight = 0.5;
  two.particles[1].weight = 0.5;
  EXPECT_LT((estimateLocation(two) - Vec3(0.5, 1, 1.5)).norm(), 1e-15);

  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  ParticleSet many;
  many.particles.resize(50);
  double total = 0.0;
  for (Particle& p : many.particles)
  {
    p.push(Vec3(u(rng), u(rng), u(rng)));
    p.weight = u(rng);
    total += p.weight;
  }
  Vec3 brute = Vec3::Zero();
  for (Particle& p : many.particles)
  {
    p.weight /= total;
    brute += p.weight * p.history[2];
  }
  EXPECT_LT((estimateLocation(many) - brute).norm(), 1e-12);
}

TEST(InterpolateBlankSteps, Examples)
{
  const Vec3 x(0.3, -0.2, 0.1);
  EXPECT_LT((interpolateBlankSteps(x, 0.0, x, 0.1, 0.17) - x).norm(), 1e-15);
  EXPECT_LT((interpolateBlankSteps(Vec3::Zero(), 0.0, Vec3(1, 0, 0), 1.0, 1.2) - Vec3(1.2, 0, 0)).norm(),
            1e-12);
  EXPECT_LT((interpolateBlankSteps(Vec3::Zero(), 0.0, x, 0.1, 0.1) - x).norm(), 1e-15);
  EXPECT_THROW(interpolateBlankSteps(x, 1.0, x, 1.0, 2.0), DegenerateInterval);
  EXPECT_THROW(interpolateBlankSteps(x, 1.0, x, 0.5, 2.0), DegenerateInterval);
}

TEST(PfStep, WeightsSumToOneAndParticlesStayInReach)
{
  const ArmModel arm;
  const PfConfig cfg;
  std::mt19937_64 rng(5);
  std::normal_distribution<double> n(0.0, 1.0);
  Rotationd theta = Rotationd::axisAngle(Vec3::UnitZ(), 0.3);
  ParticleSet set = initParticles(theta, arm, cfg, rng);
  EXPECT_NEAR(weightSum(set), 1.0, 1e-12);
  for (int step = 0; step < 200; ++step)
  {
    theta = Rotationd::axisAngle(Vec3(n(rng), n(rng), 0.2 * n(rng)), 0.02) * theta;
    try
    {
      set = pfStep(std::move(set), theta, Vec3(n(rng), n(rng), n(rng)), arm, cfg, rng);
    }
    catch (const InfeasiblePose&)
    {
      continue;
    }
    EXPECT_NEAR(weightSum(set), 1.0, 1e-9);
    for (const Particle& p : set.particles)
      for (int i = 3 - p.filled; i < 3; ++i)
        EXPECT_LE((p.history[static_cast<std::size_t>(i)] - arm.shoulder).norm(), arm.reach() + 1e-9);
  }
}

TEST(PfStep, DeterministicUnderFixedSeed)
{
  const ArmModel arm;
  const PfConfig cfg;
  const Rotationd theta = Rotationd::axisAngle(Vec3::UnitZ(), 0.3);
  auto run = [&] {
    std::mt19937_64 rng(99);
    ParticleSet set = initParticles(theta, arm, cfg, rng);
    for (int i = 0; i < 20; ++i)
      set = pfStep(std::move(set), theta, Vec3(0.1, 0.0, -0.2), arm, cfg, rng);
    return estimateLocation(set);
  };
  EXPECT_EQ(run(), run());
}

TEST(PfStep, ImpossibleLikelihoodResetsUniformly)
{
  const ArmModel arm;
  PfConfig cfg;
  cfg.sigma_accel = 1e-3;
  std::mt19937_64 rng(6);
  const Rotationd theta = Rotationd::axisAngle(Vec3::UnitZ(), 0.3);
  ParticleSet set = initParticles(theta, arm, cfg, rng);
  for (int i = 0; i < 3; ++i)
    set = pfStep(std::move(set), theta, Vec3(1e4, 0, 0), arm, cfg, rng);
  EXPECT_GT(set.resets, 0);
  EXPECT_NEAR(weightSum(set), 1.0, 1e-12);
}

TEST(LocationTracker, StationaryDriftBelowOneCentimetre)
{
  const ArmModel arm;
  const Vec3 wrist = restWristPosition(arm);
  const Rotationd theta = wristOrientation(wrist, arm);
  LocationTracker tracker(arm, PfConfig{}, 12);
  ImuSample sample;
  sample.accel = theta.applyInverse(Vec3(0.0, 0.0, kGravity));
  Vec3 first = Vec3::Zero();
  double drift = 0.0;
  for (int k = 0; k < 1500; ++k)
  {
    sample.t = k * kSampleInterval;
    const Vec3 x = tracker.step(theta, sample);
    if (k == 0)
      first = x;
    drift = std::max(drift, (x - first).norm());
  }
  EXPECT_LT(drift, 0.01);
}

TEST(PfConfig, Validation)
{
  PfConfig cfg;
  EXPECT_NO_THROW(cfg.validate());
  cfg.n_particles = 5;
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg = PfConfig{};
  cfg.K_pf = 0;
  EXPECT_THROW(cfg.validate(), ConfigError);

  ArmModel arm;
  arm.hinge_axis_in_wrf = Vec3(1, 1, 0);
  EXPECT_THROW(arm.validate(), ConfigError);
}
