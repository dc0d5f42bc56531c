/*
 *  Copyright (C) 2026 The magvox Authors
 *
 *  SPDX-License-Identifier: Apache-2.0
 *  See the file LICENSE.txt for more information.
 */

#pragma once

#include "magvox/geom.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace magvox
{

/// Nominal sampling interval (50 Hz).
inline constexpr double kSampleInterval = 0.020;

/// One IMU reading, all vectors in the watch frame.
struct ImuSample
{
  double t = 0.0;      ///< seconds
  Vec3 gyro = Vec3::Zero();  ///< rad/s
  Vec3 accel = Vec3::Zero(); ///< m/s^2, reads +9.8 upward at rest
  Vec3 mag = Vec3::Zero();   ///< uT
};

struct GroundTruth
{
  double t = 0.0;
  Rotationd orientation;          ///< WRF -> GRF
  Vec3 location = Vec3::Zero();   ///< wrist position in GRF, m
};

struct TraceMeta
{
  std::string scenario;
  std::uint64_t seed = 0;
};

struct ImuTrace
{
  std::vector<ImuSample> samples;
  std::optional<std::vector<GroundTruth>> truth;
  TraceMeta meta;

  bool hasTruth() const { return truth.has_value(); }
  std::size_t size() const { return samples.size(); }

  /// Mean spacing between samples; kSampleInterval for traces shorter than two samples.
  double sampleInterval() const;
};

/// Check finiteness, strictly increasing timestamps, constant rate and truth alignment.
void validateTrace(const ImuTrace& trace);

/**
 * CSV trace format.
 *
 * Header `t,gx,gy,gz,ax,ay,az,mx,my,mz` optionally followed by
 * `,qw,qx,qy,qz,px,py,pz` when ground truth is present. Values are written
 * with nine decimals.
 */
void writeTrace(const ImuTrace& trace, std::ostream& out);
void writeTrace(const ImuTrace& trace, const std::filesystem::path& path);

ImuTrace readTrace(std::istream& in);
ImuTrace readTrace(const std::filesystem::path& path);

} // namespace magvox
