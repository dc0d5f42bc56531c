/*
 *  Copyright (C) 2026 The magvox Authors
 *
 *  SPDX-License-Identifier: Apache-2.0
 *  See the file LICENSE.txt for more information.
 */

#pragma once

#include "magvox/config.hpp"
#include "magvox/simgen.hpp"

#include <cstdint>

namespace magvox
{

/// A complete synthetic world: field, motion, sensor noise and arm.
struct Scenario
{
  FieldModel field;
  MotionScript motion;
  NoiseModel noise;
  ArmModel arm;
  double rate_hz = 50.0;
  std::uint64_t seed = 1;
};

/// Derive an independent sub-seed (splitmix64 of seed and stream).
std::uint64_t deriveSeed(std::uint64_t seed, std::uint64_t stream);

/**
 * Read a scenario from flat keys:
 *   seed, rate_hz,
 *   field.variant (uniform|smooth|corridor), field.amplitude_deg, field.spatial_scale,
 *   field.magnitude, field.dip_deg, field.magnitude_jitter,
 *   motion.variant (static|point|lines|letters|exercise), motion.duration, motion.speed_scale,
 *   noise.gyro_std, noise.gyro_bias (x,y,z), noise.accel_std, noise.mag_std,
 *   arm.upper, arm.forearm.
 * The field, motion and noise seeds are derived from `seed`.
 */
Scenario scenarioFromConfig(const KeyValueConfig& cfg);

/// Sensor noise used by the evaluation suites (consumer-grade watch IMU).
NoiseModel standardNoise(std::uint64_t seed);

/// Evaluation scenario with the given field variant, distortion and motion.
Scenario standardScenario(FieldVariant field,
                          double amplitudeDeg,
                          MotionVariant motion,
                          double durationSeconds,
                          std::uint64_t seed);

ImuTrace generate(const Scenario& scenario);

} // namespace magvox
