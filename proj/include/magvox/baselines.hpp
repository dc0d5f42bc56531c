/*
 *  Copyright (C) 2026 The magvox Authors
 *
 *  SPDX-License-Identifier: Apache-2.0
 *  See the file LICENSE.txt for more information.
 */

#pragma once

#include "magvox/geom.hpp"

namespace magvox
{

/// Constant magnetic anchor: the nominal field direction, regardless of location.
class ConstantAnchorSource
{
public:
  explicit ConstantAnchorSource(const Vec3& nominalDirection);

  const Vec3& anchor() const { return m_anchor; }
  const Vec3& operator()(const Vec3& /*location*/) const { return m_anchor; }

private:
  Vec3 m_anchor;
};

/// Anchor used by the constant-anchor baseline: north dipping `dipDeg` below the horizon.
ConstantAnchorSource museAnchorSource(double dipDeg = 60.0);

struct AvoidConfig
{
  double M0 = 50.0;             ///< nominal magnitude, uT
  double theta0 = 60.0;         ///< nominal dip, degrees (positive downward)
  double dip_threshold = 20.0;  ///< degrees

  void validate() const;
};

/// Dip of a global-frame direction below the horizontal plane, degrees.
double dipAngle(const Vec3& grfDirection);

/// Distortion intensity in [0, 1] from magnitude and dip anomalies.
double avoidLambda(const Vec3& mag, const Rotationd& thetaHat, const AvoidConfig& cfg);

/// Magnetometer weight k_m * (1 - lambda).
double avoidWeight(double lambda, double k_m = 0.1);

} // namespace magvox
