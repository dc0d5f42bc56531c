/*
 *  Copyright (C) 2026 The magvox Authors
 *
 *  SPDX-License-Identifier: Apache-2.0
 *  See the file LICENSE.txt for more information.
 */

#pragma once

#include "magvox/geom.hpp"

#include <span>

namespace magvox
{

struct DetectorConfig
{
  double mag_lo = 40.0;  ///< uT, inclusive
  double mag_hi = 60.0;  ///< uT, inclusive
  double rel_var_max = 0.135;
  double distortion_free_threshold = 10.0; ///< degrees

  void validate() const;
};

/// Every magnitude inside [mag_lo, mag_hi].
bool criterionA(std::span<const double> magnitudes, const DetectorConfig& cfg);

/// Population sigma over mean below rel_var_max.
bool criterionB(std::span<const double> magnitudes, const DetectorConfig& cfg);

/// sigma / mean with the population standard deviation.
double relativeVariation(std::span<const double> magnitudes);

bool isDistortionFree(std::span<const double> magnitudes, const DetectorConfig& cfg);

/// Mean angle (degrees) between each direction and the normalized sum of all of them.
double distortionMagnitude(std::span<const Vec3> directions);

} // namespace magvox
