/*
 *  Copyright (C) 2026 The magvox Authors
 *
 *  SPDX-License-Identifier: Apache-2.0
 *  See the file LICENSE.txt for more information.
 */

#pragma once

#include "magvox/geom.hpp"
#include "magvox/imu_types.hpp"
#include "magvox/pfilter.hpp"

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace magvox
{

enum class FieldVariant
{
  Uniform,
  SmoothDistorted,
  Corridor,
};

/// Field direction pointing north and dipping `dipDeg` below the horizon.
Vec3 dippedNorth(double dipDeg);

/// Wrist position of the resting pose (elbow bent, forearm forward).
Vec3 restWristPosition(const ArmModel& arm);

struct FieldModel
{
  FieldVariant variant = FieldVariant::Uniform;
  Vec3 base_direction = dippedNorth(60.0);
  double base_magnitude = 50.0;       ///< uT
  double distortion_amplitude = 0.0;  ///< target distortion magnitude over the region, degrees
  double spatial_scale = 0.3;         ///< m
  double magnitude_jitter = 0.0;      ///< uT, smooth spatial magnitude modulation
  std::uint64_t seed = 1;
  /// The field equals base_magnitude * base_direction exactly here.
  Vec3 reference_point = restWristPosition(ArmModel{});
  /// Axis-aligned region (1 m^3 by default) over which distortion_amplitude is met.
  Vec3 region_center{0.2, 0.0, -0.1};
  double region_half_extent = 0.5;
};

/**
 * Deterministic, time-invariant magnetic field built from a FieldModel.
 *
 * SmoothDistorted adds a seeded sum of vector sinusoids; Corridor adds a
 * strong sideways bend concentrated around a line through the region plus a
 * weaker smooth background. The perturbation strength is solved for at
 * construction so that the distortion magnitude over a grid spanning the
 * region equals distortion_amplitude.
 */
class MagneticField
{
public:
  explicit MagneticField(FieldModel model);

  const FieldModel& model() const { return m_model; }

  /// Field vector in uT, global frame.
  Vec3 at(const Vec3& x) const;
  Vec3 directionAt(const Vec3& x) const { return at(x).normalized(); }

  /// Solved perturbation strength (0 for Uniform).
  double strength() const { return m_strength; }

  /// Regular grid over the model's region with `perAxis` points per axis.
  std::vector<Vec3> regionGrid(int perAxis) const;

private:
  struct Harmonic
  {
    Vec3 wave;
    Vec3 amplitude;
    double phase;
  };

  Vec3 rawPerturbation(const Vec3& x) const;
  double magnitudeModulation(const Vec3& x) const;
  Vec3 evaluate(const Vec3& x, double strength) const;

  FieldModel m_model;
  std::vector<Harmonic> m_harmonics;
  std::vector<Harmonic> m_magnitudeHarmonics;
  Vec3 m_corridorPoint = Vec3::Zero();
  Vec3 m_corridorDirection = Vec3::UnitY();
  Vec3 m_bendDirection = Vec3::UnitY();
  Vec3 m_meanPerturbation = Vec3::Zero();
  Rotationd m_anchorRotation;
  double m_anchorScale = 1.0;
  double m_referenceModulation = 0.0;
  double m_strength = 0.0;
};

Vec3 fieldAt(const MagneticField& field, const Vec3& x);

enum class MotionVariant
{
  Static,
  PointDirections,
  DrawLines,
  WriteLetters,
  Exercise,
};

struct MotionScript
{
  MotionVariant variant = MotionVariant::Static;
  double duration = 60.0;    ///< seconds, including the static lead-in
  double speed_scale = 1.0;
  std::uint64_t seed = 1;
  double static_lead_in = 10.0;
};

struct NoiseModel
{
  double gyro_noise_std = 0.0;   ///< rad/s
  Vec3 gyro_bias = Vec3::Zero(); ///< rad/s
  double accel_noise_std = 0.0;  ///< m/s^2
  double mag_noise_std = 0.0;    ///< uT
  std::uint64_t seed = 1;
};

/// Sampled wrist trajectory and orientation, before sensor synthesis.
struct ArmTrajectory
{
  std::vector<double> t;
  std::vector<Vec3> wrist;
  std::vector<Vec3> wrist_accel;  ///< analytic second derivative, m/s^2
  std::vector<Rotationd> orientation;
};

ArmTrajectory generateTrajectory(const MotionScript& motion, const ArmModel& arm, double rateHz);

/// Watch orientation for a wrist position via the arm's inverse kinematics.
Rotationd wristOrientation(const Vec3& wrist, const ArmModel& arm);

/// Body angular rate carrying `from` into `to` over dt (exact log map).
Vec3 bodyRate(const Rotationd& from, const Rotationd& to, double dt);

ImuTrace synthesizeTrace(const MagneticField& field,
                         const MotionScript& motion,
                         const ArmModel& arm,
                         const NoiseModel& noise,
                         double rateHz = 50.0);

/// Blend each magnetometer direction toward `referenceDir` seen through the true orientation.
ImuTrace mixDistortion(const ImuTrace& trace, double k_c, const Vec3& referenceDir);

/// `n` seeded unit directions uniform on the sphere.
std::vector<Vec3> starCatalog(int n, std::uint64_t seed);

std::string_view toString(FieldVariant v);
std::string_view toString(MotionVariant v);
FieldVariant parseFieldVariant(std::string_view s);
MotionVariant parseMotionVariant(std::string_view s);

} // namespace magvox
