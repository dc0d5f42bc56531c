/*
 *  Copyright (C) 2026 The magvox Authors
 *
 *  SPDX-License-Identifier: Apache-2.0
 *  See the file LICENSE.txt for more information.
 */

#pragma once

#include "magvox/geom.hpp"
#include "magvox/imu_types.hpp"

#include <optional>
#include <span>

namespace magvox
{

inline constexpr double kGravity = 9.8;

struct FilterConfig
{
  double k_a = 0.1;
  double k_m = 0.1;
  /// Accelerometer calibration only runs while | |a| - g | stays within this band (m/s^2).
  double static_boundary = 1.3;
  /// Calibrations run when the step index is a multiple of K_c.
  int K_c = 24;
  /// Gyroscope integration runs when the step index is a multiple of K_g.
  int K_g = 1;
  /// Length of the static initialization window, seconds.
  double init_window = 10.0;
  /// Allowed deviation of |a| from g inside the initialization window.
  double init_static_tolerance = 0.3;
  /// Use 1 - (1 - k)^K_c instead of k when calibrating every K_c steps.
  bool rescale_with_K_c = false;

  void validate() const;
};

struct FilterState
{
  Rotationd theta;        ///< current WRF -> GRF estimate
  long step_index = 0;
  bool initialized = false;
  double last_t = 0.0;
};

/**
 * Orientation from a static window: mean accelerometer direction maps to +Z
 * and the horizontal part of the mean magnetometer maps to +X (north).
 *
 * Throws NotStatic when any |a| leaves g +/- init_static_tolerance, DataError
 * when the window is shorter than init_window, and DegenerateField when the
 * field is within 1 degree of vertical.
 */
FilterState initialize(std::span<const ImuSample> staticSamples, const FilterConfig& cfg);

/// Body-frame rotation by |omega| * dt about omega.
Rotationd gyroStep(const Vec3& omega, double dt);

/// Fractional correction carrying the transformed accelerometer direction toward +Z.
Rotationd gravityCalibration(const FilterState& state, const Vec3& accel, const FilterConfig& cfg);

/// Fractional correction carrying the transformed magnetometer direction toward `anchor`.
Rotationd magneticCalibration(const FilterState& state,
                              const Vec3& mag,
                              const std::optional<Vec3>& anchor,
                              const FilterConfig& cfg);

/**
 * One complementary-filter iteration:
 *   theta <- theta . R_g . R_a(k_a) . R_m(k_m)
 *
 * R_g is measured in the watch frame, so it is composed on the watch side of
 * theta; R_a and R_m live in the global frame and are applied after it. Both
 * calibrations are computed from the gyro-propagated estimate.
 */
FilterState fuseStep(const FilterState& state,
                     const ImuSample& sample,
                     const std::optional<Vec3>& anchor,
                     const FilterConfig& cfg);

} // namespace magvox
