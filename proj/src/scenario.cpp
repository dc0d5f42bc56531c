/*
 *  Copyright (C) 2026 The magvox Authors
 *
 *  SPDX-License-Identifier: Apache-2.0
 *  See the file LICENSE.txt for more information.
 */

#include "magvox/scenario.hpp"

#include <random>

namespace magvox
{

std::uint64_t deriveSeed(std::uint64_t seed, std::uint64_t stream)
{
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

Scenario scenarioFromConfig(const KeyValueConfig& cfg)
{
  Scenario s;
  s.seed = cfg.getUint("seed", 1);
  s.rate_hz = cfg.getDouble("rate_hz", 50.0);

  s.arm.upper_arm_len = cfg.getDouble("arm.upper", s.arm.upper_arm_len);
  s.arm.forearm_len = cfg.getDouble("arm.forearm", s.arm.forearm_len);
  s.arm.validate();

  s.field.variant = parseFieldVariant(cfg.getString("field.variant", "uniform"));
  s.field.distortion_amplitude = cfg.getDouble("field.amplitude_deg", 0.0);
  s.field.spatial_scale = cfg.getDouble("field.spatial_scale", s.field.spatial_scale);
  s.field.base_magnitude = cfg.getDouble("field.magnitude", s.field.base_magnitude);
  s.field.base_direction = dippedNorth(cfg.getDouble("field.dip_deg", 60.0));
  s.field.magnitude_jitter = cfg.getDouble("field.magnitude_jitter", 0.0);
  s.field.reference_point = restWristPosition(s.arm);
  s.field.seed = deriveSeed(s.seed, 1);

  s.motion.variant = parseMotionVariant(cfg.getString("motion.variant", "static"));
  s.motion.duration = cfg.getDouble("motion.duration", 60.0);
  s.motion.speed_scale = cfg.getDouble("motion.speed_scale", 1.0);
  s.motion.seed = deriveSeed(s.seed, 2);

  s.noise.gyro_noise_std = cfg.getDouble("noise.gyro_std", 0.0);
  const std::vector<double> bias = cfg.getDoubleList("noise.gyro_bias", {0.0, 0.0, 0.0});
  if (bias.size() != 3)
    throw ConfigError("noise.gyro_bias needs three comma-separated values");
  s.noise.gyro_bias = Vec3(bias[0], bias[1], bias[2]);
  s.noise.accel_noise_std = cfg.getDouble("noise.accel_std", 0.0);
  s.noise.mag_noise_std = cfg.getDouble("noise.mag_std", 0.0);
  s.noise.seed = deriveSeed(s.seed, 3);

  if (!(s.rate_hz > 0.0) || !(s.motion.duration > 0.0))
    throw ConfigError("rate_hz and motion.duration must be positive");
  return s;
}

NoiseModel standardNoise(std::uint64_t seed)
{
  NoiseModel n;
  n.gyro_noise_std = 0.01;
  n.accel_noise_std = 0.05;
  n.mag_noise_std = 0.5;
  n.seed = deriveSeed(seed, 3);

  // Residual bias after factory calibration, about 0.1 deg/s per axis.
  std::mt19937_64 rng(deriveSeed(seed, 4));
  std::normal_distribution<double> normal(0.0, deg2rad(0.1));
  n.gyro_bias = Vec3(normal(rng), normal(rng), normal(rng));
  return n;
}

Scenario standardScenario(FieldVariant field,
                          double amplitudeDeg,
                          MotionVariant motion,
                          double durationSeconds,
                          std::uint64_t seed)
{
  Scenario s;
  s.seed = seed;
  s.field.variant = field;
  s.field.distortion_amplitude = amplitudeDeg;
  s.field.spatial_scale = field == FieldVariant::Corridor ? 0.2 : 0.3;
  s.field.reference_point = restWristPosition(s.arm);
  s.field.seed = deriveSeed(seed, 1);
  s.motion.variant = motion;
  s.motion.duration = durationSeconds;
  s.motion.seed = deriveSeed(seed, 2);
  s.noise = standardNoise(seed);
  return s;
}

ImuTrace generate(const Scenario& scenario)
{
  const MagneticField field(scenario.field);
  ImuTrace trace = synthesizeTrace(field, scenario.motion, scenario.arm, scenario.noise, scenario.rate_hz);
  trace.meta.seed = scenario.seed;
  return trace;
}

} // namespace magvox
