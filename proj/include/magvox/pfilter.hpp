/*
 *  Copyright (C) 2026 The magvox Authors
 *
 *  SPDX-License-Identifier: Apache-2.0
 *  See the file LICENSE.txt for more information.
 */

#pragma once

#include "magvox/geom.hpp"

#include <array>
#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace magvox
{

/**
 * Two-segment arm: shoulder (fixed) -> elbow -> wrist.
 *
 * The watch X axis runs along the forearm and the watch Y axis is the elbow
 * hinge, so an orientation fixes the forearm direction and the hinge. The
 * only free coordinate is the elbow flexion angle (0 = straight arm), which
 * sweeps the elbow over an arc of the circle perpendicular to the hinge.
 */
struct ArmModel
{
  Vec3 shoulder = Vec3::Zero();
  double upper_arm_len = 0.30;
  double forearm_len = 0.27;
  Vec3 forearm_axis_in_wrf = Vec3::UnitX();
  Vec3 hinge_axis_in_wrf = Vec3::UnitY();
  double flexion_min = 0.0;                   ///< rad
  double flexion_max = deg2rad(150.0);        ///< rad
  double max_elevation = deg2rad(60.0);       ///< upper arm elevation above horizontal, rad

  double reach() const { return upper_arm_len + forearm_len; }
  void validate() const;
};

Vec3 elbowPosition(const Rotationd& theta, const ArmModel& model, double flexion);
Vec3 wristPosition(const Rotationd& theta, const ArmModel& model, double flexion);

/// Flexion angles compatible with an orientation, as a union of closed intervals.
class FlexionRange
{
public:
  /// Throws InfeasiblePose when no flexion works and the closest one misses by more than 1 cm.
  FlexionRange(const Rotationd& theta, const ArmModel& model);

  const std::vector<std::pair<double, double>>& intervals() const { return m_intervals; }
  double length() const { return m_length; }

  /// Map u in [0, 1) uniformly onto the feasible set.
  double sample(double u) const;
  /// Nearest feasible flexion.
  double clamp(double flexion) const;
  /// Random-walk step inside the interval holding `from`, reflecting at its ends.
  double move(double from, double delta) const;

private:
  std::vector<std::pair<double, double>> m_intervals;
  double m_length = 0.0;
};

/// `n` wrist positions sampled uniformly over the feasible elbow arc.
std::vector<Vec3> reachableSet(const Rotationd& theta,
                               const ArmModel& model,
                               int n,
                               std::uint64_t seed);

struct PfConfig
{
  int n_particles = 500;
  int K_pf = 5;
  double resample_fraction = 0.5;
  double elbow_jitter = 0.05;  ///< rad
  double sigma_accel = 1.0;    ///< m/s^2
  double sample_interval = 0.020;

  double effectiveInterval() const { return K_pf * sample_interval; }
  void validate() const;
};

struct Particle
{
  double flexion = 0.0;
  /// Oldest to newest; only the last `filled` entries are meaningful.
  std::array<Vec3, 3> history{Vec3::Zero(), Vec3::Zero(), Vec3::Zero()};
  int filled = 0;
  double weight = 0.0;

  void push(const Vec3& location);
  const Vec3& latest() const { return history[2]; }
};

struct ParticleSet
{
  std::vector<Particle> particles;
  /// Number of steps that fell back to a uniform reset.
  int resets = 0;
};

/// Second difference of the particle history divided by dt_eff^2.
Vec3 predictedAcceleration(const Particle& p, double dtEff);

ParticleSet initParticles(const Rotationd& theta,
                          const ArmModel& model,
                          const PfConfig& cfg,
                          std::mt19937_64& rng);

/**
 * Propose, weight and partially resample.
 *
 * `linearAccelGrf` is the gravity-free wrist acceleration in the global frame
 * that the second difference of each particle's history should reproduce.
 */
ParticleSet pfStep(ParticleSet set,
                   const Rotationd& theta,
                   const Vec3& linearAccelGrf,
                   const ArmModel& model,
                   const PfConfig& cfg,
                   std::mt19937_64& rng);

/// Weighted mean of the newest particle locations.
Vec3 estimateLocation(const ParticleSet& set);

/// Line through (t1, x1) and (t2, x2) evaluated at t.
Vec3 interpolateBlankSteps(const Vec3& x1, double t1, const Vec3& x2, double t2, double t);

} // namespace magvox
