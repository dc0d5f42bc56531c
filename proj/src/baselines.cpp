/*
 *  Copyright (C) 2026 The magvox Authors
 *
 *  SPDX-License-Identifier: Apache-2.0
 *  See the file LICENSE.txt for more information.
 */

#include "magvox/baselines.hpp"

#include "magvox/simgen.hpp"

#include <algorithm>
#include <cmath>

namespace magvox
{

ConstantAnchorSource::ConstantAnchorSource(const Vec3& nominalDirection)
  : m_anchor(normalize(nominalDirection))
{
}

ConstantAnchorSource museAnchorSource(double dipDeg)
{
  return ConstantAnchorSource(dippedNorth(dipDeg));
}

void AvoidConfig::validate() const
{
  if (!(M0 > 0.0))
    throw ConfigError("M0 must be positive");
  if (!(dip_threshold > 0.0))
    throw ConfigError("dip_threshold must be positive");
}

double dipAngle(const Vec3& grfDirection)
{
  const double horizontal = std::hypot(grfDirection.x(), grfDirection.y());
  return rad2deg(std::atan2(-grfDirection.z(), horizontal));
}

double avoidLambda(const Vec3& mag, const Rotationd& thetaHat, const AvoidConfig& cfg)
{
  const double m = mag.norm();
  if (m < 1e-9)
    throw ZeroField();
  const double lambda1 = std::min(1.0, std::abs(m - cfg.M0) / cfg.M0);
  const double dip = dipAngle(thetaHat.apply(mag));
  const double lambda2 = std::min(1.0, std::abs(dip - cfg.theta0) / cfg.dip_threshold);
  return 0.5 * (lambda1 + lambda2);
}

double avoidWeight(double lambda, double k_m)
{
  return k_m * (1.0 - lambda);
}

} // namespace magvox
