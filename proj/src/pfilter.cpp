/*
 *  Copyright (C) 2026 The magvox Authors
 *
 *  SPDX-License-Identifier: Apache-2.0
 *  See the file LICENSE.txt for more information.
 */

#include "magvox/pfilter.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <fmt/format.h>

namespace magvox
{
namespace
{
constexpr int kScanPoints = 301;
constexpr double kPoseSlack = 0.01; // m

Vec3 upperArmDirection(const Rotationd& theta, const ArmModel& model, double flexion)
{
  const Vec3 forearm = normalize(theta.apply(model.forearm_axis_in_wrf));
  const Vec3 hinge = normalize(theta.apply(model.hinge_axis_in_wrf));
  return Eigen::AngleAxisd(-flexion, hinge) * forearm;
}

/// Height of the elbow above the allowed elevation limit, m (<= 0 when feasible).
double elevationExcess(const Rotationd& theta, const ArmModel& model, double flexion)
{
  const Vec3 u = upperArmDirection(theta, model, flexion);
  return model.upper_arm_len * (u.z() - std::sin(model.max_elevation));
}
} // namespace

void ArmModel::validate() const
{
  if (!(upper_arm_len > 0.0) || !(forearm_len > 0.0))
    throw ConfigError("arm segment lengths must be positive");
  if (!(flexion_min <= flexion_max))
    throw ConfigError("flexion_min must not exceed flexion_max");
  if (std::abs(forearm_axis_in_wrf.normalized().dot(hinge_axis_in_wrf.normalized())) > 1e-9)
    throw ConfigError("hinge axis must be perpendicular to the forearm axis");
}

Vec3 elbowPosition(const Rotationd& theta, const ArmModel& model, double flexion)
{
  return model.shoulder + model.upper_arm_len * upperArmDirection(theta, model, flexion);
}

Vec3 wristPosition(const Rotationd& theta, const ArmModel& model, double flexion)
{
  const Vec3 forearm = normalize(theta.apply(model.forearm_axis_in_wrf));
  return elbowPosition(theta, model, flexion) + model.forearm_len * forearm;
}

FlexionRange::FlexionRange(const Rotationd& theta, const ArmModel& model)
{
  const double lo = model.flexion_min;
  const double hi = model.flexion_max;
  if (hi == lo)
  {
    if (elevationExcess(theta, model, lo) > kPoseSlack)
      throw InfeasiblePose("elbow would rise above the elevation limit");
    m_intervals.emplace_back(lo, lo);
    return;
  }

  const double step = (hi - lo) / (kScanPoints - 1);
  double bestFlexion = lo;
  double bestExcess = elevationExcess(theta, model, lo);
  bool open = false;
  double start = lo;
  for (int i = 0; i < kScanPoints; ++i)
  {
    const double phi = lo + step * i;
    const double excess = elevationExcess(theta, model, phi);
    if (excess < bestExcess)
    {
      bestExcess = excess;
      bestFlexion = phi;
    }
    const bool ok = excess <= 0.0;
    if (ok && !open)
    {
      open = true;
      start = phi;
    }
    if (!ok && open)
    {
      open = false;
      m_intervals.emplace_back(start, phi - step);
    }
  }
  if (open)
    m_intervals.emplace_back(start, hi);

  if (m_intervals.empty())
  {
    if (bestExcess > kPoseSlack)
      throw InfeasiblePose(
          fmt::format("no elbow placement within limits (closest misses by {:.3f} m)", bestExcess));
    m_intervals.emplace_back(bestFlexion, bestFlexion);
  }

  for (const auto& [a, b] : m_intervals)
    m_length += b - a;
}

double FlexionRange::sample(double u) const
{
  if (m_length <= 0.0)
  {
    const std::size_t i = std::min(m_intervals.size() - 1,
                                   static_cast<std::size_t>(u * static_cast<double>(m_intervals.size())));
    return m_intervals[i].first;
  }
  double remaining = u * m_length;
  for (const auto& [a, b] : m_intervals)
  {
    if (remaining <= b - a)
      return a + remaining;
    remaining -= b - a;
  }
  return m_intervals.back().second;
}

double FlexionRange::clamp(double flexion) const
{
  double best = m_intervals.front().first;
  double bestDist = std::abs(flexion - best);
  for (const auto& [a, b] : m_intervals)
  {
    const double c = std::clamp(flexion, a, b);
    const double d = std::abs(flexion - c);
    if (d < bestDist)
    {
      bestDist = d;
      best = c;
    }
  }
  return best;
}

double FlexionRange::move(double from, double delta) const
{
  // Clamping would park walkers on the limits, where they stop moving and win
  // every stationary likelihood; reflection keeps the walk unbiased.
  const double start = clamp(from);
  for (const auto& [a, b] : m_intervals)
  {
    if (start < a || start > b)
      continue;
    const double len = b - a;
    if (len <= 0.0)
      return a;
    double x = std::fmod(start + delta - a, 2.0 * len);
    if (x < 0.0)
      x += 2.0 * len;
    if (x > len)
      x = 2.0 * len - x;
    return a + x;
  }
  return start;
}

std::vector<Vec3> reachableSet(const Rotationd& theta,
                               const ArmModel& model,
                               int n,
                               std::uint64_t seed)
{
  if (n < 1)
    throw ConfigError("reachable set needs at least one sample");
  const FlexionRange range(theta, model);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);

  std::vector<Vec3> out;
  out.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    out.push_back(wristPosition(theta, model, range.sample(uniform(rng))));
  return out;
}

void PfConfig::validate() const
{
  if (n_particles < 10)
    throw ConfigError("n_particles must be at least 10");
  if (K_pf < 1)
    throw ConfigError("K_pf must be at least 1");
  if (!(resample_fraction >= 0.0 && resample_fraction < 1.0))
    throw ConfigError("resample_fraction must lie in [0, 1)");
  if (!(sigma_accel > 0.0) || !(elbow_jitter >= 0.0))
    throw ConfigError("sigma_accel must be positive and elbow_jitter non-negative");
}

void Particle::push(const Vec3& location)
{
  history[0] = history[1];
  history[1] = history[2];
  history[2] = location;
  filled = std::min(filled + 1, 3);
}

Vec3 predictedAcceleration(const Particle& p, double dtEff)
{
  if (p.filled < 3)
    throw IncompleteHistory();
  return (p.history[2] - 2.0 * p.history[1] + p.history[0]) / (dtEff * dtEff);
}

ParticleSet initParticles(const Rotationd& theta,
                          const ArmModel& model,
                          const PfConfig& cfg,
                          std::mt19937_64& rng)
{
  const FlexionRange range(theta, model);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);

  ParticleSet set;
  set.particles.resize(static_cast<std::size_t>(cfg.n_particles));
  const double w = 1.0 / cfg.n_particles;
  for (Particle& p : set.particles)
  {
    p.flexion = range.sample(uniform(rng));
    p.push(wristPosition(theta, model, p.flexion));
    p.weight = w;
  }
  return set;
}

ParticleSet pfStep(ParticleSet set,
                   const Rotationd& theta,
                   const Vec3& linearAccelGrf,
                   const ArmModel& model,
                   const PfConfig& cfg,
                   std::mt19937_64& rng)
{
  auto& particles = set.particles;
  const std::size_t n = particles.size();
  const FlexionRange range(theta, model);
  const double dtEff = cfg.effectiveInterval();
  const double inv2s2 = 1.0 / (2.0 * cfg.sigma_accel * cfg.sigma_accel);
  std::normal_distribution<double> jitter(0.0, cfg.elbow_jitter);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);

  // Propose along the elbow arc and weight by acceleration agreement.
  double total = 0.0;
  for (Particle& p : particles)
  {
    p.flexion = range.move(p.flexion, jitter(rng));
    p.push(wristPosition(theta, model, p.flexion));
    double likelihood = 1.0;
    if (p.filled == 3)
      likelihood = std::exp(-(predictedAcceleration(p, dtEff) - linearAccelGrf).squaredNorm() * inv2s2);
    p.weight *= likelihood;
    total += p.weight;
  }

  if (!(total > 0.0) || !std::isfinite(total))
  {
    ++set.resets;
    for (Particle& p : particles)
    {
      p.flexion = range.sample(uniform(rng));
      p.filled = 0;
      p.push(wristPosition(theta, model, p.flexion));
      p.weight = 1.0 / static_cast<double>(n);
    }
    return set;
  }
  for (Particle& p : particles)
    p.weight /= total;

  // Replace the weakest fraction by jittered copies of survivors drawn by weight.
  const std::size_t replace = static_cast<std::size_t>(cfg.resample_fraction * static_cast<double>(n));
  if (replace > 0 && replace < n)
  {
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return particles[a].weight < particles[b].weight;
    });

    std::vector<double> cumulative;
    cumulative.reserve(n - replace);
    double acc = 0.0;
    for (std::size_t i = replace; i < n; ++i)
    {
      acc += particles[order[i]].weight;
      cumulative.push_back(acc);
    }

    // Systematic draw over the survivors.
    const double stride = acc / static_cast<double>(replace);
    double pointer = uniform(rng) * stride;
    std::size_t k = 0;
    std::normal_distribution<double> copyJitter(0.0, 0.5 * cfg.elbow_jitter);
    for (std::size_t r = 0; r < replace; ++r, pointer += stride)
    {
      while (k + 1 < cumulative.size() && cumulative[k] < pointer)
        ++k;
      Particle copy = particles[order[replace + k]];
      copy.flexion = range.move(copy.flexion, copyJitter(rng));
      copy.history[2] = wristPosition(theta, model, copy.flexion);
      particles[order[r]] = copy;
    }

    total = 0.0;
    for (const Particle& p : particles)
      total += p.weight;
    for (Particle& p : particles)
      p.weight /= total;
  }
  return set;
}

Vec3 estimateLocation(const ParticleSet& set)
{
  Vec3 x = Vec3::Zero();
  for (const Particle& p : set.particles)
    x += p.weight * p.latest();
  return x;
}

Vec3 interpolateBlankSteps(const Vec3& x1, double t1, const Vec3& x2, double t2, double t)
{
  if (!(t2 > t1))
    throw DegenerateInterval();
  return (x2 * (t - t1) - x1 * (t - t2)) / (t2 - t1);
}

} // namespace magvox
