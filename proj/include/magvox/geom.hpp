/*
 *  Copyright (C) 2026 The magvox Authors
 *
 *  SPDX-License-Identifier: Apache-2.0
 *  See the file LICENSE.txt for more information.
 */

#pragma once

#include "magvox/errors.hpp"

#include <cmath>
#include <numbers>

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace magvox
{

template <typename Scalar>
using Vector3 = Eigen::Matrix<Scalar, 3, 1>;

using Vec3 = Vector3<double>;

/// Global frame axes: X north, Y west, Z up.
namespace grf
{
inline const Vec3 north{1.0, 0.0, 0.0};
inline const Vec3 west{0.0, 1.0, 0.0};
inline const Vec3 up{0.0, 0.0, 1.0};
} // namespace grf

template <typename Scalar>
constexpr Scalar deg2rad(Scalar deg)
{
  return deg * std::numbers::pi_v<Scalar> / Scalar{180};
}

template <typename Scalar>
constexpr Scalar rad2deg(Scalar rad)
{
  return rad * Scalar{180} / std::numbers::pi_v<Scalar>;
}

/**
 * Orientation of the watch frame (WRF) relative to the global frame (GRF).
 *
 * The public convention is row vectors: v_grf = v_wrf * M, where M is
 * matrix(). Composition follows the same reading order, so (A * B) applies A
 * first and then B. Internally the rotation is a unit quaternion acting on
 * column vectors; it is renormalized on every construction.
 */
template <typename Scalar>
class Rotation
{
public:
  using Vec = Vector3<Scalar>;
  using Mat = Eigen::Matrix<Scalar, 3, 3>;
  using Quat = Eigen::Quaternion<Scalar>;

  Rotation() : m_q(Quat::Identity()) {}

  explicit Rotation(const Quat& q) : m_q(q.normalized())
  {
    if (m_q.w() < Scalar{0})
      m_q.coeffs() = -m_q.coeffs();
  }

  static Rotation identity() { return Rotation(); }

  /// Right-handed rotation by `angle` radians about `axis` (need not be unit).
  static Rotation axisAngle(const Vec& axis, Scalar angle)
  {
    const Scalar n = axis.norm();
    if (n == Scalar{0} || angle == Scalar{0})
      return Rotation();
    return Rotation(Quat(Eigen::AngleAxis<Scalar>(angle, axis / n)));
  }

  /// Build from a row-convention matrix (rows are the WRF axes expressed in GRF).
  static Rotation fromRowMatrix(const Mat& m) { return Rotation(Quat(Mat(m.transpose()))); }

  const Quat& quaternion() const { return m_q; }

  /// Row-convention matrix M with v_grf = v_wrf * M.
  Mat matrix() const { return m_q.toRotationMatrix().transpose(); }

  /// v * M for a row vector v.
  Vec apply(const Vec& v) const { return m_q * v; }

  /// v * M^T, the inverse mapping.
  Vec applyInverse(const Vec& v) const { return m_q.conjugate() * v; }

  Rotation inverse() const { return Rotation(m_q.conjugate()); }

  /// Rotation angle in [0, pi].
  Scalar angle() const
  {
    return Scalar{2} * std::atan2(m_q.vec().norm(), std::abs(m_q.w()));
  }

  /// Unit rotation axis; +X for the identity.
  Vec axis() const
  {
    const Scalar n = m_q.vec().norm();
    if (n == Scalar{0})
      return Vec::UnitX();
    return m_q.vec() / n;
  }

  bool isIdentity() const
  {
    return m_q.w() == Scalar{1} && m_q.vec().isZero(Scalar{0});
  }

  /// Apply `a`, then `b`.
  friend Rotation operator*(const Rotation& a, const Rotation& b) { return Rotation(b.m_q * a.m_q); }

private:
  Quat m_q;
};

using Rotationd = Rotation<double>;

template <typename Scalar>
Vector3<Scalar> normalize(const Vector3<Scalar>& v)
{
  const Scalar n = v.norm();
  if (!(n > Scalar{0}) || !std::isfinite(n))
    throw DataError("cannot normalize a zero or non-finite vector");
  return v / n;
}

/// Minimal rotation carrying unit direction `measured` onto unit direction `target`.
template <typename Scalar>
Rotation<Scalar> rotationFromTwoDirections(const Vector3<Scalar>& measured,
                                           const Vector3<Scalar>& target)
{
  const Scalar dot = measured.dot(target);
  if (dot <= Scalar{-1} + Scalar{1e-12})
    throw AntiparallelInput();

  // Half-angle quaternion (1 + u.v, u x v), normalized by the constructor.
  const Vector3<Scalar> cross = measured.cross(target);
  return Rotation<Scalar>(
      typename Rotation<Scalar>::Quat(Scalar{1} + dot, cross.x(), cross.y(), cross.z()));
}

/// Same axis, k times the angle. k is expected in [0, 1].
template <typename Scalar>
Rotation<Scalar> fractionalRotation(const Rotation<Scalar>& r, Scalar k)
{
  if (k == Scalar{0} || r.isIdentity())
    return Rotation<Scalar>::identity();
  if (k == Scalar{1})
    return r;
  return Rotation<Scalar>::axisAngle(r.axis(), k * r.angle());
}

/// Angle in degrees of the rotation that aligns `estimate` with `truth`.
template <typename Scalar>
Scalar orientationError(const Rotation<Scalar>& estimate, const Rotation<Scalar>& truth)
{
  return rad2deg((estimate * truth.inverse()).angle());
}

/// Angle between two unit directions, in degrees.
template <typename Scalar>
Scalar angleBetween(const Vector3<Scalar>& a, const Vector3<Scalar>& b)
{
  // atan2 keeps precision near 0 and 180 degrees where acos does not.
  return rad2deg(std::atan2(a.cross(b).norm(), a.dot(b)));
}

} // namespace magvox
