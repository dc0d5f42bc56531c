/*
 *  Copyright (C) 2026 The magvox Authors
 *
 *  SPDX-License-Identifier: Apache-2.0
 *  See the file LICENSE.txt for more information.
 */

#include "magvox/detector.hpp"

#include <algorithm>
#include <cmath>

namespace magvox
{

void DetectorConfig::validate() const
{
  if (!(mag_lo < mag_hi))
    throw ConfigError("mag_lo must be below mag_hi");
  if (!(rel_var_max > 0.0))
    throw ConfigError("rel_var_max must be positive");
}

bool criterionA(std::span<const double> magnitudes, const DetectorConfig& cfg)
{
  if (magnitudes.empty())
    throw EmptyInput();
  return std::all_of(magnitudes.begin(), magnitudes.end(),
                     [&](double m) { return m >= cfg.mag_lo && m <= cfg.mag_hi; });
}

double relativeVariation(std::span<const double> magnitudes)
{
  if (magnitudes.empty())
    throw EmptyInput();
  const double n = static_cast<double>(magnitudes.size());
  double mean = 0.0;
  for (double m : magnitudes)
    mean += m;
  mean /= n;
  if (!(mean > 0.0))
    throw NonPositiveMean();

  double var = 0.0;
  for (double m : magnitudes)
    var += (m - mean) * (m - mean);
  var /= n;
  return std::sqrt(var) / mean;
}

bool criterionB(std::span<const double> magnitudes, const DetectorConfig& cfg)
{
  return relativeVariation(magnitudes) < cfg.rel_var_max;
}

bool isDistortionFree(std::span<const double> magnitudes, const DetectorConfig& cfg)
{
  const bool a = criterionA(magnitudes, cfg);
  const bool b = criterionB(magnitudes, cfg);
  return a && b;
}

double distortionMagnitude(std::span<const Vec3> directions)
{
  if (directions.size() < 2)
    throw TooFewSamples();
  Vec3 sum = Vec3::Zero();
  for (const Vec3& d : directions)
    sum += d;
  if (sum.norm() < 1e-9)
    throw DegenerateMean();
  const Vec3 mean = sum.normalized();

  double total = 0.0;
  for (const Vec3& d : directions)
    total += angleBetween(d, mean);
  return total / static_cast<double>(directions.size());
}

} // namespace magvox
