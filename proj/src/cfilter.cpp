/*
 *  Copyright (C) 2026 The magvox Authors
 *
 *  SPDX-License-Identifier: Apache-2.0
 *  See the file LICENSE.txt for more information.
 */

#include "magvox/cfilter.hpp"

#include <cmath>

#include <fmt/format.h>

namespace magvox
{
namespace
{
double effectiveWeight(double k, const FilterConfig& cfg)
{
  if (!cfg.rescale_with_K_c || cfg.K_c <= 1)
    return k;
  return 1.0 - std::pow(1.0 - k, cfg.K_c);
}

Rotationd correctionToward(const Vec3& measuredGrf, const Vec3& target, double k)
{
  if (k == 0.0)
    return Rotationd::identity();
  try
  {
    return fractionalRotation(rotationFromTwoDirections(measuredGrf, target), k);
  }
  catch (const AntiparallelInput&)
  {
    return Rotationd::identity();
  }
}
} // namespace

void FilterConfig::validate() const
{
  if (!(k_a >= 0.0 && k_a <= 1.0) || !(k_m >= 0.0 && k_m <= 1.0))
    throw ConfigError("k_a and k_m must lie in [0, 1]");
  if (K_c < 1 || K_g < 1)
    throw ConfigError("K_c and K_g must be at least 1");
  if (!(static_boundary >= 0.0))
    throw ConfigError("static_boundary must be non-negative");
  if (!(init_window > 0.0))
    throw ConfigError("init_window must be positive");
}

FilterState initialize(std::span<const ImuSample> staticSamples, const FilterConfig& cfg)
{
  if (staticSamples.empty())
    throw DataError("initialization window is empty");

  const double dt = staticSamples.size() > 1
                        ? (staticSamples.back().t - staticSamples.front().t) /
                              static_cast<double>(staticSamples.size() - 1)
                        : kSampleInterval;
  const double span = staticSamples.back().t - staticSamples.front().t + dt;
  if (span < cfg.init_window - 1e-6)
    throw DataError(fmt::format("initialization window spans {:.3f} s, need {:.3f} s", span,
                                cfg.init_window));

  Vec3 accel = Vec3::Zero();
  Vec3 mag = Vec3::Zero();
  for (const ImuSample& s : staticSamples)
  {
    const double a = s.accel.norm();
    if (std::abs(a - kGravity) > cfg.init_static_tolerance)
      throw NotStatic(fmt::format("accelerometer magnitude {:.3f} m/s^2 at t={:.3f} s", a, s.t));
    accel += s.accel;
    mag += s.mag;
  }

  // GRF axes expressed in watch coordinates.
  const Vec3 zAxis = normalize(accel);
  const Vec3 magDir = normalize(mag);
  if (angleBetween(magDir, zAxis) < 1.0 || angleBetween(magDir, Vec3(-zAxis)) < 1.0)
    throw DegenerateField("magnetic field is within 1 degree of vertical");
  const Vec3 xAxis = normalize(Vec3(magDir - magDir.dot(zAxis) * zAxis));
  const Vec3 yAxis = zAxis.cross(xAxis);

  // Row convention: v_grf[i] = v_wrf . axis_i, so the axes are the matrix columns.
  Eigen::Matrix3d m;
  m.col(0) = xAxis;
  m.col(1) = yAxis;
  m.col(2) = zAxis;

  FilterState state;
  state.theta = Rotationd::fromRowMatrix(m);
  state.step_index = 0;
  state.initialized = true;
  state.last_t = staticSamples.back().t;
  return state;
}

Rotationd gyroStep(const Vec3& omega, double dt)
{
  const double rate = omega.norm();
  if (rate == 0.0)
    return Rotationd::identity();
  return Rotationd::axisAngle(omega / rate, rate * dt);
}

Rotationd gravityCalibration(const FilterState& state, const Vec3& accel, const FilterConfig& cfg)
{
  const double a = accel.norm();
  if (a == 0.0 || std::abs(a - kGravity) > cfg.static_boundary)
    return Rotationd::identity();
  // At rest the accelerometer reads the upward reaction, so its GRF target is +Z.
  const Vec3 measured = state.theta.apply(Vec3(accel / a));
  return correctionToward(measured, grf::up, effectiveWeight(cfg.k_a, cfg));
}

Rotationd magneticCalibration(const FilterState& state,
                              const Vec3& mag,
                              const std::optional<Vec3>& anchor,
                              const FilterConfig& cfg)
{
  if (!anchor)
    return Rotationd::identity();
  const double m = mag.norm();
  if (m == 0.0)
    return Rotationd::identity();
  const Vec3 measured = state.theta.apply(Vec3(mag / m));
  return correctionToward(measured, *anchor, effectiveWeight(cfg.k_m, cfg));
}

FilterState fuseStep(const FilterState& state,
                     const ImuSample& sample,
                     const std::optional<Vec3>& anchor,
                     const FilterConfig& cfg)
{
  FilterState next = state;
  next.step_index = state.step_index + 1;
  next.last_t = sample.t;
  const double dt = sample.t - state.last_t;

  if (next.step_index % cfg.K_g == 0 && dt > 0.0)
  {
    const Rotationd rg = gyroStep(sample.gyro, dt * cfg.K_g);
    if (!rg.isIdentity())
      next.theta = rg * next.theta;
  }

  if (next.step_index % cfg.K_c == 0)
  {
    const Rotationd ra = gravityCalibration(next, sample.accel, cfg);
    const Rotationd rm = magneticCalibration(next, sample.mag, anchor, cfg);
    if (!ra.isIdentity())
      next.theta = next.theta * ra;
    if (!rm.isIdentity())
      next.theta = next.theta * rm;
  }
  return next;
}

} // namespace magvox
