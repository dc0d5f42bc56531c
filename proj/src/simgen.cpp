/*
 *  Copyright (C) 2026 The magvox Authors
 *
 *  SPDX-License-Identifier: Apache-2.0
 *  See the file LICENSE.txt for more information.
 */

#include "magvox/simgen.hpp"

#include "magvox/cfilter.hpp"
#include "magvox/detector.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <random>
#include <span>

#include <fmt/format.h>

namespace magvox
{
namespace
{
constexpr int kHarmonics = 10;
constexpr int kCalibrationGrid = 11;
constexpr double kCorridorBackground = 0.3;

// Wrist workspace kept in front of the body; see generateTrajectory.
constexpr double kMinForward = 0.20;
constexpr double kMaxReachFraction = 0.95;

Vec3 randomUnit(std::mt19937_64& rng)
{
  std::normal_distribution<double> normal(0.0, 1.0);
  for (;;)
  {
    const Vec3 v(normal(rng), normal(rng), normal(rng));
    const double n = v.norm();
    if (n > 1e-12)
      return v / n;
  }
}

// Letters on a unit square (x right, y up), one connected stroke each.
using Glyph = std::vector<std::array<double, 2>>;

const std::array<Glyph, 26>& glyphs()
{
  static const std::array<Glyph, 26> table = {{
      {{0, 0}, {0.5, 1}, {1, 0}, {0.75, 0.5}, {0.25, 0.5}},                                  // A
      {{0, 0}, {0, 1}, {0.7, 1}, {0.85, 0.75}, {0.6, 0.5}, {0, 0.5}, {0.8, 0.45}, {0.9, 0.2}, {0.7, 0}, {0, 0}}, // B
      {{1, 0.9}, {0.6, 1}, {0.1, 0.8}, {0, 0.5}, {0.1, 0.2}, {0.6, 0}, {1, 0.1}},            // C
      {{0, 0}, {0, 1}, {0.6, 1}, {1, 0.6}, {1, 0.4}, {0.6, 0}, {0, 0}},                      // D
      {{1, 1}, {0, 1}, {0, 0.5}, {0.7, 0.5}, {0, 0.5}, {0, 0}, {1, 0}},                      // E
      {{1, 1}, {0, 1}, {0, 0.5}, {0.7, 0.5}, {0, 0.5}, {0, 0}},                              // F
      {{1, 0.9}, {0.5, 1}, {0, 0.6}, {0.1, 0.1}, {0.6, 0}, {1, 0.3}, {1, 0.5}, {0.5, 0.5}},  // G
      {{0, 1}, {0, 0}, {0, 0.5}, {1, 0.5}, {1, 1}, {1, 0}},                                  // H
      {{0.2, 1}, {0.8, 1}, {0.5, 1}, {0.5, 0}, {0.2, 0}, {0.8, 0}},                          // I
      {{0.3, 1}, {1, 1}, {0.8, 1}, {0.8, 0.2}, {0.5, 0}, {0.1, 0.2}},                        // J
      {{0, 1}, {0, 0}, {0, 0.4}, {1, 1}, {0.3, 0.55}, {1, 0}},                               // K
      {{0, 1}, {0, 0}, {1, 0}},                                                              // L
      {{0, 0}, {0, 1}, {0.5, 0.4}, {1, 1}, {1, 0}},                                          // M
      {{0, 0}, {0, 1}, {1, 0}, {1, 1}},                                                      // N
      {{0.5, 1}, {0, 0.7}, {0, 0.3}, {0.5, 0}, {1, 0.3}, {1, 0.7}, {0.5, 1}},                // O
      {{0, 0}, {0, 1}, {0.8, 1}, {1, 0.75}, {0.8, 0.5}, {0, 0.5}},                           // P
      {{0.5, 1}, {0, 0.7}, {0, 0.3}, {0.5, 0}, {1, 0.3}, {1, 0.7}, {0.5, 1}, {0.7, 0.3}, {1, 0}}, // Q
      {{0, 0}, {0, 1}, {0.8, 1}, {1, 0.75}, {0.8, 0.5}, {0, 0.5}, {1, 0}},                   // R
      {{1, 0.9}, {0.5, 1}, {0, 0.75}, {0.5, 0.5}, {1, 0.25}, {0.5, 0}, {0, 0.1}},            // S
      {{0, 1}, {1, 1}, {0.5, 1}, {0.5, 0}},                                                  // T
      {{0, 1}, {0, 0.2}, {0.3, 0}, {0.7, 0}, {1, 0.2}, {1, 1}},                              // U
      {{0, 1}, {0.5, 0}, {1, 1}},                                                            // V
      {{0, 1}, {0.25, 0}, {0.5, 0.6}, {0.75, 0}, {1, 1}},                                    // W
      {{0, 1}, {1, 0}, {0.5, 0.5}, {1, 1}, {0, 0}},                                          // X
      {{0, 1}, {0.5, 0.5}, {1, 1}, {0.5, 0.5}, {0.5, 0}},                                    // Y
      {{0, 1}, {1, 1}, {0, 0}, {1, 0}},                                                      // Z
  }};
  return table;
}

/// Resample a polyline so consecutive points are at most `spacing` apart.
void appendResampled(std::vector<Vec3>& out, const Vec3& from, const Vec3& to, double spacing)
{
  const double len = (to - from).norm();
  const int steps = std::max(1, static_cast<int>(std::ceil(len / spacing)));
  for (int i = 1; i <= steps; ++i)
    out.push_back(from + (to - from) * (static_cast<double>(i) / steps));
}

/// Pull a wrist target into the region the arm model can reach comfortably.
Vec3 clampTarget(Vec3 p, const ArmModel& arm)
{
  p.x() = std::max(p.x(), arm.shoulder.x() + kMinForward);
  Vec3 r = p - arm.shoulder;
  const double maxReach = kMaxReachFraction * arm.reach();
  if (r.norm() > maxReach)
    r *= maxReach / r.norm();
  return arm.shoulder + r;
}

bool comfortable(const Vec3& wrist, const ArmModel& arm)
{
  const Rotationd theta = wristOrientation(wrist, arm);
  const Vec3 forearm = theta.apply(arm.forearm_axis_in_wrf);
  const Vec3 elbow = wrist - arm.forearm_len * forearm;
  const Vec3 upper = (elbow - arm.shoulder) / arm.upper_arm_len;
  return upper.z() <= std::sin(arm.max_elevation) - 0.05;
}

std::vector<Vec3> controlPoints(const MotionScript& motion,
                                const ArmModel& arm,
                                double spacingTime,
                                std::mt19937_64& rng)
{
  const Vec3 rest = restWristPosition(arm);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);

  const int leadIn = static_cast<int>(std::ceil(motion.static_lead_in / spacingTime)) + 4;
  const int total = static_cast<int>(std::ceil(motion.duration / spacingTime)) + 8;
  std::vector<Vec3> pts(static_cast<std::size_t>(leadIn), rest);

  auto push = [&](const Vec3& p) { pts.push_back(clampTarget(p, arm)); };
  auto randomComfortable = [&](double rMin, double rMax) {
    for (;;)
    {
      Vec3 dir = randomUnit(rng);
      dir.x() = std::abs(dir.x()) + 0.3;
      dir.normalize();
      const double r = rMin + (rMax - rMin) * uniform(rng);
      const Vec3 p = clampTarget(arm.shoulder + r * dir, arm);
      if (comfortable(p, arm))
        return p;
    }
  };

  switch (motion.variant)
  {
  case MotionVariant::Static:
    break;

  case MotionVariant::PointDirections:
    while (static_cast<int>(pts.size()) < total)
    {
      const Vec3 target = randomComfortable(0.45, 0.54);
      for (int k = 0; k < 3; ++k)
        push(target);
      const Vec3 back = rest + 0.05 * randomUnit(rng);
      push(back);
      push(back);
    }
    break;

  case MotionVariant::DrawLines:
    while (static_cast<int>(pts.size()) < total)
    {
      const Vec3 start(0.25 + 0.2 * uniform(rng), -0.35 + 0.5 * uniform(rng),
                       -0.35 + 0.5 * uniform(rng));
      const Vec3 dir = randomUnit(rng);
      const double len = 0.15 + 0.2 * uniform(rng);
      std::vector<Vec3> stroke;
      appendResampled(stroke, pts.back(), start, 0.03);
      appendResampled(stroke, start, Vec3(start + len * dir), 0.03);
      for (const Vec3& p : stroke)
        push(p);
    }
    break;

  case MotionVariant::WriteLetters:
  {
    const Vec3 origin(0.38, 0.05, -0.25);
    const Vec3 right(0.0, -0.3, 0.0);
    const Vec3 up(0.0, 0.0, 0.3);
    int letter = static_cast<int>(uniform(rng) * 26.0) % 26;
    while (static_cast<int>(pts.size()) < total)
    {
      const Glyph& g = glyphs()[static_cast<std::size_t>(letter)];
      std::vector<Vec3> stroke;
      Vec3 prev = pts.back();
      for (const auto& [gx, gy] : g)
      {
        const Vec3 p = origin + gx * right + gy * up;
        appendResampled(stroke, prev, p, 0.025);
        prev = p;
      }
      for (const Vec3& p : stroke)
        push(p);
      letter = (letter + 1) % 26;
    }
    break;
  }

  case MotionVariant::Exercise:
    while (static_cast<int>(pts.size()) < total)
      push(randomComfortable(0.25, 0.54));
    break;
  }

  pts.resize(static_cast<std::size_t>(std::max(total, leadIn)), pts.back());
  // Hold the final position so the spline ends at rest velocity.
  for (int k = 0; k < 4; ++k)
    pts.push_back(pts.back());
  return pts;
}

double spacingFor(const MotionScript& motion)
{
  double base = 0.4;
  switch (motion.variant)
  {
  case MotionVariant::Static:
    base = 1.0;
    break;
  case MotionVariant::PointDirections:
    base = 0.4;
    break;
  case MotionVariant::DrawLines:
    base = 0.12;
    break;
  case MotionVariant::WriteLetters:
    base = 0.1;
    break;
  case MotionVariant::Exercise:
    base = 0.45;
    break;
  }
  return base / std::max(motion.speed_scale, 1e-3);
}
} // namespace

Vec3 dippedNorth(double dipDeg)
{
  const double dip = deg2rad(dipDeg);
  return Vec3(std::cos(dip), 0.0, -std::sin(dip));
}

Vec3 restWristPosition(const ArmModel& arm)
{
  return arm.shoulder + Vec3(arm.forearm_len, 0.0, -arm.upper_arm_len);
}

MagneticField::MagneticField(FieldModel model) : m_model(std::move(model))
{
  m_model.base_direction = normalize(m_model.base_direction);
  if (!(m_model.base_magnitude > 0.0))
    throw ConfigError("base_magnitude must be positive");
  if (!(m_model.spatial_scale > 0.0))
    throw ConfigError("spatial_scale must be positive");

  std::mt19937_64 rng(m_model.seed);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  const double twoPi = 2.0 * std::numbers::pi;

  auto makeHarmonics = [&](std::vector<Harmonic>& out) {
    for (int j = 0; j < kHarmonics; ++j)
    {
      const double k = (0.7 + 0.6 * uniform(rng)) / m_model.spatial_scale;
      Harmonic h;
      h.wave = k * randomUnit(rng);
      h.amplitude = randomUnit(rng) / std::sqrt(static_cast<double>(kHarmonics) / 2.0);
      h.phase = twoPi * uniform(rng);
      out.push_back(h);
    }
  };
  makeHarmonics(m_harmonics);
  makeHarmonics(m_magnitudeHarmonics);

  // Corridor: a line through the middle of the region with a sideways bend.
  const Vec3 jitter(uniform(rng) - 0.5, uniform(rng) - 0.5, uniform(rng) - 0.5);
  m_corridorPoint = m_model.region_center + 0.4 * m_model.region_half_extent * jitter;
  const double heading = twoPi * uniform(rng);
  m_corridorDirection = Vec3(std::cos(heading), std::sin(heading), 0.0);
  Vec3 horizontal = m_model.base_direction;
  horizontal.z() = 0.0;
  if (horizontal.norm() < 1e-6)
    horizontal = grf::north;
  m_bendDirection = grf::up.cross(horizontal.normalized());
  if (uniform(rng) < 0.5)
    m_bendDirection = -m_bendDirection;

  m_referenceModulation = magnitudeModulation(m_model.reference_point);

  if (m_model.variant == FieldVariant::Uniform || m_model.distortion_amplitude <= 0.0)
    return;

  // The perturbation is centered over the region so that it bends the field
  // around the base value instead of offsetting it.
  const std::vector<Vec3> grid = regionGrid(kCalibrationGrid);
  for (const Vec3& x : grid)
    m_meanPerturbation += rawPerturbation(x);
  m_meanPerturbation /= static_cast<double>(grid.size());

  // Solve for the strength that meets the requested distortion over the region.
  std::vector<Vec3> dirs(grid.size());
  auto distortionAt = [&](double strength) {
    for (std::size_t i = 0; i < grid.size(); ++i)
      dirs[i] = evaluate(grid[i], strength).normalized();
    return distortionMagnitude(dirs);
  };

  double lo = 0.0;
  double hi = 2.0;
  if (distortionAt(hi) < m_model.distortion_amplitude)
    m_strength = hi;
  else
  {
    for (int it = 0; it < 50; ++it)
    {
      const double mid = 0.5 * (lo + hi);
      if (distortionAt(mid) < m_model.distortion_amplitude)
        lo = mid;
      else
        hi = mid;
    }
    m_strength = 0.5 * (lo + hi);
  }

  // A global rotation and scale make the field equal the base vector at the
  // reference point; directions keep their spread, so the distortion is unchanged.
  const Vec3 atReference = evaluate(m_model.reference_point, m_strength);
  m_anchorRotation = rotationFromTwoDirections(atReference.normalized(), m_model.base_direction);
  m_anchorScale = m_model.base_magnitude / atReference.norm();
}

Vec3 MagneticField::rawPerturbation(const Vec3& x) const
{
  Vec3 smooth = Vec3::Zero();
  for (const Harmonic& h : m_harmonics)
    smooth += h.amplitude * std::sin(h.wave.dot(x) + h.phase);

  if (m_model.variant != FieldVariant::Corridor)
    return smooth;

  const Vec3 r = x - m_corridorPoint;
  const Vec3 across = r - r.dot(m_corridorDirection) * m_corridorDirection;
  const double s2 = m_model.spatial_scale * m_model.spatial_scale;
  const double bend = std::exp(-across.squaredNorm() / (2.0 * s2));
  return bend * m_bendDirection + kCorridorBackground * smooth;
}

double MagneticField::magnitudeModulation(const Vec3& x) const
{
  double q = 0.0;
  for (const Harmonic& h : m_magnitudeHarmonics)
    q += h.amplitude.x() * std::sin(h.wave.dot(x) + h.phase);
  return q;
}

Vec3 MagneticField::evaluate(const Vec3& x, double strength) const
{
  const double b0 = m_model.base_magnitude;
  Vec3 v = b0 * m_model.base_direction;
  if (m_model.variant != FieldVariant::Uniform && strength != 0.0)
    v += strength * b0 * (rawPerturbation(x) - m_meanPerturbation);
  if (m_model.magnitude_jitter != 0.0)
  {
    const double scale =
        1.0 + m_model.magnitude_jitter / b0 * (magnitudeModulation(x) - m_referenceModulation);
    v *= std::max(scale, 0.1);
  }
  return v;
}

Vec3 MagneticField::at(const Vec3& x) const
{
  return m_anchorScale * m_anchorRotation.apply(evaluate(x, m_strength));
}

std::vector<Vec3> MagneticField::regionGrid(int perAxis) const
{
  std::vector<Vec3> grid;
  grid.reserve(static_cast<std::size_t>(perAxis * perAxis * perAxis));
  const double h = m_model.region_half_extent;
  for (int i = 0; i < perAxis; ++i)
    for (int j = 0; j < perAxis; ++j)
      for (int k = 0; k < perAxis; ++k)
      {
        const Vec3 f(i / (perAxis - 1.0), j / (perAxis - 1.0), k / (perAxis - 1.0));
        grid.push_back(m_model.region_center + h * (2.0 * f - Vec3::Ones()));
      }
  return grid;
}

Vec3 fieldAt(const MagneticField& field, const Vec3& x)
{
  return field.at(x);
}

Rotationd wristOrientation(const Vec3& wrist, const ArmModel& arm)
{
  const double U = arm.upper_arm_len;
  const double F = arm.forearm_len;
  const Vec3 r = wrist - arm.shoulder;
  const double d = std::clamp(r.norm(), std::abs(U - F) + 1e-6, U + F - 1e-6);
  const Vec3 a = r.normalized();

  // Elbow on the circle around the shoulder-wrist line, swung down and to the side.
  const double cosAlpha = std::clamp((U * U + d * d - F * F) / (2.0 * U * d), -1.0, 1.0);
  const double sinAlpha = std::sqrt(1.0 - cosAlpha * cosAlpha);
  const Vec3 preferred = Vec3(-0.5, -0.3, -1.0).normalized();
  const Vec3 e = normalize(Vec3(preferred - preferred.dot(a) * a));
  const Vec3 elbow = arm.shoulder + U * (cosAlpha * a + sinAlpha * e);

  const Vec3 forearm = normalize(Vec3(arm.shoulder + d * a - elbow));
  const Vec3 upper = (elbow - arm.shoulder) / U;
  const Vec3 hinge = normalize(upper.cross(forearm));

  // Rows are the watch axes in GRF; map the model's WRF axes onto them.
  Eigen::Matrix3d wrfAxes;
  const Vec3 fa = arm.forearm_axis_in_wrf.normalized();
  const Vec3 ha = arm.hinge_axis_in_wrf.normalized();
  wrfAxes.row(0) = fa.transpose();
  wrfAxes.row(1) = ha.transpose();
  wrfAxes.row(2) = fa.cross(ha).transpose();
  Eigen::Matrix3d grfAxes;
  grfAxes.row(0) = forearm.transpose();
  grfAxes.row(1) = hinge.transpose();
  grfAxes.row(2) = forearm.cross(hinge).transpose();
  // wrfAxes * M = grfAxes
  return Rotationd::fromRowMatrix(wrfAxes.transpose() * grfAxes);
}

Vec3 bodyRate(const Rotationd& from, const Rotationd& to, double dt)
{
  const Eigen::Quaterniond delta = from.quaternion().conjugate() * to.quaternion();
  const Eigen::AngleAxisd aa(delta.w() < 0.0 ? Eigen::Quaterniond(-delta.coeffs()) : delta);
  return aa.axis() * aa.angle() / dt;
}

ArmTrajectory generateTrajectory(const MotionScript& motion, const ArmModel& arm, double rateHz)
{
  arm.validate();
  if (!(rateHz > 0.0) || !(motion.duration > 0.0))
    throw ConfigError("rate and duration must be positive");

  std::mt19937_64 rng(motion.seed);
  const double tau = spacingFor(motion);
  const std::vector<Vec3> pts = controlPoints(motion, arm, tau, rng);

  const auto n = static_cast<std::size_t>(std::llround(motion.duration * rateHz));
  ArmTrajectory traj;
  traj.t.resize(n);
  traj.wrist.resize(n);
  traj.wrist_accel.resize(n);
  traj.orientation.resize(n);

  const double dt = 1.0 / rateHz;
  for (std::size_t i = 0; i < n; ++i)
  {
    const double t = static_cast<double>(i) * dt;
    const double s = t / tau;
    const auto seg = std::min(static_cast<std::size_t>(s), pts.size() - 4);
    const double u = std::clamp(s - static_cast<double>(seg), 0.0, 1.0);
    const double u2 = u * u;
    const double u3 = u2 * u;
    const std::array<double, 4> b = {(1 - u) * (1 - u) * (1 - u) / 6.0,
                                     (3 * u3 - 6 * u2 + 4) / 6.0,
                                     (-3 * u3 + 3 * u2 + 3 * u + 1) / 6.0, u3 / 6.0};
    const std::array<double, 4> b2 = {1 - u, 3 * u - 2, -3 * u + 1, u};

    Vec3 p = Vec3::Zero();
    Vec3 acc = Vec3::Zero();
    for (std::size_t k = 0; k < 4; ++k)
    {
      p += b[k] * pts[seg + k];
      acc += b2[k] * pts[seg + k];
    }
    traj.t[i] = t;
    traj.wrist[i] = p;
    traj.wrist_accel[i] = acc / (tau * tau);
    traj.orientation[i] = wristOrientation(p, arm);
  }
  return traj;
}

ImuTrace synthesizeTrace(const MagneticField& field,
                         const MotionScript& motion,
                         const ArmModel& arm,
                         const NoiseModel& noise,
                         double rateHz)
{
  const ArmTrajectory traj = generateTrajectory(motion, arm, rateHz);
  const double dt = 1.0 / rateHz;

  std::mt19937_64 rng(noise.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  auto noiseVec = [&](double sigma) {
    if (sigma == 0.0)
      return Vec3(Vec3::Zero());
    return Vec3(sigma * normal(rng), sigma * normal(rng), sigma * normal(rng));
  };

  ImuTrace trace;
  trace.meta.scenario =
      fmt::format("{}/{}", toString(field.model().variant), toString(motion.variant));
  trace.meta.seed = motion.seed;
  trace.samples.resize(traj.t.size());
  std::vector<GroundTruth> truth(traj.t.size());

  for (std::size_t i = 0; i < traj.t.size(); ++i)
  {
    const Rotationd& q = traj.orientation[i];
    ImuSample& s = trace.samples[i];
    s.t = traj.t[i];

    const Vec3 omega = i == 0 ? Vec3(Vec3::Zero()) : bodyRate(traj.orientation[i - 1], q, dt);
    s.gyro = omega + noise.gyro_bias + noiseVec(noise.gyro_noise_std);

    const Vec3 specific = traj.wrist_accel[i] + kGravity * grf::up;
    s.accel = q.applyInverse(specific) + noiseVec(noise.accel_noise_std);

    s.mag = q.applyInverse(field.at(traj.wrist[i])) + noiseVec(noise.mag_noise_std);

    truth[i] = GroundTruth{s.t, q, traj.wrist[i]};
  }
  trace.truth = std::move(truth);
  return trace;
}

ImuTrace mixDistortion(const ImuTrace& trace, double k_c, const Vec3& referenceDir)
{
  if (!trace.truth)
    throw MissingGroundTruth();
  if (!(k_c >= 0.0 && k_c <= 1.0))
    throw ConfigError("k_c must lie in [0, 1]");

  const Vec3 ref = normalize(referenceDir);
  ImuTrace out = trace;
  for (std::size_t i = 0; i < out.samples.size(); ++i)
  {
    Vec3& mag = out.samples[i].mag;
    const double m = mag.norm();
    if (m == 0.0)
      continue;
    const Vec3 refWrf = (*trace.truth)[i].orientation.applyInverse(ref);
    const Vec3 blended = k_c * (mag / m) + (1.0 - k_c) * refWrf;
    if (blended.norm() < 1e-12)
      continue;
    mag = m * blended.normalized();
  }
  return out;
}

std::vector<Vec3> starCatalog(int n, std::uint64_t seed)
{
  if (n < 1)
    throw ConfigError("star catalog needs at least one star");
  std::mt19937_64 rng(seed);
  std::vector<Vec3> stars;
  stars.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    stars.push_back(randomUnit(rng));
  return stars;
}

std::string_view toString(FieldVariant v)
{
  switch (v)
  {
  case FieldVariant::Uniform:
    return "uniform";
  case FieldVariant::SmoothDistorted:
    return "smooth";
  case FieldVariant::Corridor:
    return "corridor";
  }
  return "?";
}

std::string_view toString(MotionVariant v)
{
  switch (v)
  {
  case MotionVariant::Static:
    return "static";
  case MotionVariant::PointDirections:
    return "point";
  case MotionVariant::DrawLines:
    return "lines";
  case MotionVariant::WriteLetters:
    return "letters";
  case MotionVariant::Exercise:
    return "exercise";
  }
  return "?";
}

FieldVariant parseFieldVariant(std::string_view s)
{
  for (FieldVariant v : {FieldVariant::Uniform, FieldVariant::SmoothDistorted, FieldVariant::Corridor})
    if (s == toString(v))
      return v;
  throw ConfigError(fmt::format("unknown field variant '{}'", s));
}

MotionVariant parseMotionVariant(std::string_view s)
{
  for (MotionVariant v : {MotionVariant::Static, MotionVariant::PointDirections,
                          MotionVariant::DrawLines, MotionVariant::WriteLetters,
                          MotionVariant::Exercise})
    if (s == toString(v))
      return v;
  throw ConfigError(fmt::format("unknown motion variant '{}'", s));
}

} // namespace magvox
