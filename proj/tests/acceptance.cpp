/*
 *  Copyright (C) 2026 The magvox Authors
 *
 *  SPDX-License-Identifier: Apache-2.0
 *  See the file LICENSE.txt for more information.
 */

// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any fails.

#include "magvox/experiments.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace magvox;

namespace
{

struct Outcome
{
  bool pass = false;
  std::string detail;
};

double seconds(std::chrono::steady_clock::time_point since)
{
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - since).count();
}

constexpr MotionVariant kMotions[] = {MotionVariant::PointDirections, MotionVariant::DrawLines,
                                      MotionVariant::WriteLetters, MotionVariant::Exercise};

// ---------------------------------------------------------------------------

Outcome zeroNoiseSanity()
{
  const auto start = std::chrono::steady_clock::now();
  Scenario s;
  s.seed = 1;
  s.field.variant = FieldVariant::Uniform;
  s.motion.variant = MotionVariant::Static;
  s.motion.duration = 70.0;  // 10 s initialization + 60 s evaluated
  const ImuTrace trace = generate(s);

  double worst = 0.0;
  for (Estimator e : {Estimator::Mdr, Estimator::Muse, Estimator::Avoid, Estimator::GyroAcc})
  {
    RunConfig cfg = runConfigFor(s, RunConfig{});
    cfg.estimator = e;
    cfg.record_steps = false;
    worst = std::max(worst, runScenario(s, trace, cfg).mean_orientation_error_deg);
  }
  const double wall = seconds(start);
  return {worst < 0.01 && wall < 1.0,
          fmt::format("worst mean error {:.2e} deg, runtime {:.2f} s", worst, wall)};
}

// ---------------------------------------------------------------------------

Outcome distortionResistance()
{
  const auto start = std::chrono::steady_clock::now();
  constexpr double kLevels[] = {10.0, 20.0, 30.0};
  constexpr int kSeeds = 10;
  const Estimator estimators[] = {Estimator::Mdr, Estimator::Muse, Estimator::Avoid};

  std::vector<Scenario> scenarios;
  for (double level : kLevels)
    for (int i = 0; i < kSeeds; ++i)
      scenarios.push_back(standardScenario(FieldVariant::SmoothDistorted, level, kMotions[i % 4],
                                           300.0, 200 + static_cast<std::uint64_t>(i)));

  RunConfig base;
  base.database_mode = DatabaseMode::On;
  base.eval_start_s = 130.0;  // 10 s initialization + 2 min warm-up
  const std::vector<CompareRow> rows = compareEstimators(scenarios, estimators, base);

  std::map<std::pair<double, Estimator>, double> mean;
  for (std::size_t i = 0; i < rows.size(); ++i)
  {
    const double level = scenarios[i / 3].field.distortion_amplitude;
    mean[{level, rows[i].estimator}] += rows[i].report.mean_orientation_error_deg / kSeeds;
  }

  bool pass = true;
  std::string detail;
  for (double level : kLevels)
  {
    const double mdr = mean[{level, Estimator::Mdr}];
    const double muse = mean[{level, Estimator::Muse}];
    const double avoid = mean[{level, Estimator::Avoid}];
    pass = pass && mdr < muse;
    if (level == 30.0)
      pass = pass && mdr < avoid;
    detail += fmt::format("{:g}deg mdr/muse/avoid {:.2f}/{:.2f}/{:.2f}; ", level, mdr, muse, avoid);
  }
  const double mdrRise = mean[{30.0, Estimator::Mdr}] - mean[{10.0, Estimator::Mdr}];
  const double museRise = mean[{30.0, Estimator::Muse}] - mean[{10.0, Estimator::Muse}];
  pass = pass && mdrRise < museRise;
  const double wall = seconds(start);
  pass = pass && wall < 300.0;
  detail += fmt::format("rise 10->30 mdr {:.2f} vs muse {:.2f}; runtime {:.1f} s", mdrRise,
                        museRise, wall);
  return {pass, detail};
}

// ---------------------------------------------------------------------------

Outcome databaseConvergence()
{
  const Scenario s =
      standardScenario(FieldVariant::Corridor, 30.0, MotionVariant::WriteLetters, 610.0, 300);
  const ImuTrace trace = generate(s);
  RunConfig cfg = runConfigFor(s, RunConfig{});
  cfg.database_mode = DatabaseMode::On;
  cfg.db_error_every = 250;  // every 5 s
  const MetricsReport r = runScenario(s, trace, cfg);

  double peak = 0.0;
  double finalError = std::numeric_limits<double>::quiet_NaN();
  long voxelsAt7 = 0;
  long voxelsAt10 = 0;
  for (const StepRow& row : r.steps)
  {
    if (!std::isnan(row.db_error_deg))
    {
      if (row.t >= 60.0 && row.t <= 120.0)
        peak = std::max(peak, row.db_error_deg);
      finalError = row.db_error_deg;
    }
    if (row.t <= 420.0)
      voxelsAt7 = row.db_voxels;
    voxelsAt10 = row.db_voxels;
  }
  const double drop = peak > 0.0 ? 1.0 - finalError / peak : 0.0;
  const double growth =
      voxelsAt7 > 0 ? static_cast<double>(voxelsAt10 - voxelsAt7) / static_cast<double>(voxelsAt7)
                    : 1.0;
  return {drop >= 0.25 && growth < 0.05,
          fmt::format("peak(1-2 min) {:.2f} deg, at 10 min {:.2f} deg, drop {:.1f}% (need >= 25%); "
                      "voxels {} -> {} over final 3 min, growth {:.1f}% (need < 5%)",
                      peak, finalError, 100.0 * drop, voxelsAt7, voxelsAt10, 100.0 * growth)};
}

// ---------------------------------------------------------------------------

Outcome adaptiveUpdating()
{
  constexpr int kSeeds = 50;
  std::vector<AdaptiveTrial> trials(kSeeds);
  parallelFor(kSeeds, [&](std::size_t i) {
    const Scenario s = standardScenario(FieldVariant::Corridor, 30.0, kMotions[i % 4], 130.0,
                                        400 + static_cast<std::uint64_t>(i));
    trials[i] = adaptiveVsNaive(s, generate(s), AdaptiveExperiment{}, deriveSeed(s.seed, 7));
  });

  int wins = 0;
  double improvement = 0.0;
  for (const AdaptiveTrial& t : trials)
  {
    wins += t.adaptive_error_deg <= t.naive_error_deg ? 1 : 0;
    improvement += (t.naive_error_deg - t.adaptive_error_deg) / t.naive_error_deg / kSeeds;
  }
  return {wins >= 45 && improvement >= 0.03,
          fmt::format("adaptive <= naive on {}/{} seeds, mean relative improvement {:.2f}%", wins,
                      kSeeds, 100.0 * improvement)};
}

// ---------------------------------------------------------------------------

Outcome detectionF1()
{
  const DetectionReport r = detectionBenchmark(200, 500);
  const double best = std::max(r.a.f1, r.b.f1);
  long positives = 0;
  for (const DetectionCase& c : r.cases)
    positives += c.label ? 1 : 0;
  return {r.combined.f1 >= 0.90 && r.combined.f1 >= best - 0.02,
          fmt::format("F1 A {:.4f}, B {:.4f}, A+B {:.4f} ({} distortion-free of {})", r.a.f1,
                      r.b.f1, r.combined.f1, positives, r.cases.size())};
}

// ---------------------------------------------------------------------------

Outcome resolutionUShape()
{
  std::vector<Scenario> suite;
  for (int i = 0; i < 8; ++i)
    suite.push_back(standardScenario(FieldVariant::Corridor, 30.0, kMotions[i % 4], 300.0,
                                     600 + static_cast<std::uint64_t>(i)));
  const double lDb[] = {0.025, 0.05, 0.1, 0.2, 0.4};
  RunConfig base;
  base.database_mode = DatabaseMode::On;
  base.eval_start_s = 130.0;
  const std::vector<SweepRow> rows = resolutionSweep(suite, lDb, base);

  const double fine = rows[0].mean_orientation_error_deg;
  const double coarse = rows[4].mean_orientation_error_deg;
  bool pass = false;
  for (int i : {1, 2})
    pass = pass || (rows[i].mean_orientation_error_deg < fine &&
                    rows[i].mean_orientation_error_deg < coarse);
  std::string detail = "mean error by l_db:";
  for (const SweepRow& r : rows)
    detail += fmt::format(" {:g}m={:.2f}", r.l_db, r.mean_orientation_error_deg);
  return {pass, detail};
}

// ---------------------------------------------------------------------------

Outcome iaiOracle()
{
  constexpr int kSteps = 1'000'000;
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-3.0, 3.0);

  IaiTracker tracker;
  const double k = tracker.k_iai;
  std::vector<double> speed(kSteps);
  std::vector<double> series(kSteps);
  long double reference = 0.0L;
  double worst = 0.0;
  for (int n = 0; n < kSteps; ++n)
  {
    const Vec3 w(u(rng), u(rng), u(rng));
    speed[n] = std::sqrt(w.x() * w.x() + w.y() * w.y() + w.z() * w.z());
    tracker = iaiStep(tracker, w);
    series[n] = tracker.iai;
    reference = reference * k + static_cast<long double>(speed[n]) * (1.0L - k);
    worst = std::max(worst, std::abs(tracker.iai - static_cast<double>(reference)));
  }

  // Unrolled form over a 200-step window: iai_n = k^m iai_{n-m} + (1-k) sum_j k^j |w_{n-j}|.
  constexpr int kWindow = 200;
  std::uniform_int_distribution<int> pick(kWindow, kSteps - 1);
  for (int trial = 0; trial < 1000; ++trial)
  {
    const int n = pick(rng);
    long double sum = std::pow(static_cast<long double>(k), kWindow) * series[n - kWindow];
    for (int j = 0; j < kWindow; ++j)
      sum += (1.0L - k) * std::pow(static_cast<long double>(k), j) * speed[n - j];
    worst = std::max(worst, std::abs(series[n] - static_cast<double>(sum)));
  }

  // Constant speed c from zero: iai = c (1 - k^n).
  IaiTracker constant;
  for (int n = 1; n <= 100; ++n)
    constant = iaiStep(constant, Vec3(0.0, 2.0, 0.0));
  worst = std::max(worst, std::abs(constant.iai - 2.0 * (1.0 - std::pow(k, 100))));

  return {worst <= 1e-9, fmt::format("max deviation {:.3e} over {} steps", worst, kSteps)};
}

// ---------------------------------------------------------------------------

/// Written from the formula only: row vector times matrix, dip from asin.
double bruteLambda(const Vec3& mag, const Rotationd& theta, const AvoidConfig& cfg)
{
  const Eigen::Matrix3d m = theta.matrix();
  double g[3] = {0.0, 0.0, 0.0};
  for (int c = 0; c < 3; ++c)
    for (int r = 0; r < 3; ++r)
      g[c] += mag[r] * m(r, c);
  const double len = std::sqrt(mag[0] * mag[0] + mag[1] * mag[1] + mag[2] * mag[2]);
  const double glen = std::sqrt(g[0] * g[0] + g[1] * g[1] + g[2] * g[2]);
  const double dip = std::asin(std::clamp(-g[2] / glen, -1.0, 1.0)) * 180.0 / M_PI;
  double l1 = std::fabs(len - cfg.M0) / cfg.M0;
  if (l1 > 1.0)
    l1 = 1.0;
  double l2 = std::fabs(dip - cfg.theta0) / cfg.dip_threshold;
  if (l2 > 1.0)
    l2 = 1.0;
  return (l1 + l2) / 2.0;
}

Outcome avoidOracle()
{
  std::mt19937_64 rng(8);
  std::normal_distribution<double> n(0.0, 1.0);
  std::uniform_real_distribution<double> u(0.0, 1.0);

  double worst = 0.0;
  for (int i = 0; i < 100'000; ++i)
  {
    AvoidConfig cfg;
    cfg.M0 = 30.0 + 40.0 * u(rng);
    cfg.theta0 = -80.0 + 160.0 * u(rng);
    const Vec3 mag = (5.0 + 120.0 * u(rng)) * Vec3(n(rng), n(rng), n(rng)).normalized();
    const Rotationd theta = Rotationd::axisAngle(Vec3(n(rng), n(rng), n(rng)), M_PI * u(rng));
    worst = std::max(worst, std::abs(avoidLambda(mag, theta, cfg) - bruteLambda(mag, theta, cfg)));
  }

  // Clamp boundaries, with the field dipping exactly theta0.
  const AvoidConfig cfg;
  const Vec3 dir = dippedNorth(cfg.theta0);
  const Rotationd id = Rotationd::identity();
  const bool clamps =
      std::abs(avoidLambda(cfg.M0 * dir, id, cfg)) < 1e-12 &&
      std::abs(avoidLambda(2.0 * cfg.M0 * dir, id, cfg) - 0.5) < 1e-12 &&
      std::abs(avoidLambda(10.0 * cfg.M0 * dir, id, cfg) - 0.5) < 1e-12 &&
      std::abs(avoidLambda(cfg.M0 * dippedNorth(cfg.theta0 - cfg.dip_threshold), id, cfg) - 0.5) <
          1e-9 &&
      std::abs(avoidLambda(10.0 * cfg.M0 * dippedNorth(-80.0), id, cfg) - 1.0) < 1e-12 &&
      std::abs(avoidLambda(55.0 * dippedNorth(cfg.theta0 + 10.0), id, cfg) - 0.3) < 1e-9;

  return {worst <= 1e-12 && clamps,
          fmt::format("max deviation {:.3e} over 1e5 inputs, clamps {}", worst,
                      clamps ? "ok" : "wrong")};
}

// ---------------------------------------------------------------------------

/// Frustum test written with tangents on the matrix rows.
bool bruteInView(const Rotationd& r, const Vec3& s)
{
  const Eigen::Matrix3d m = r.matrix();  // row i = WRF axis i in GRF
  const double d = s.dot(m.row(0).transpose());
  if (!(d > 0.0))
    return false;
  return std::abs(s.dot(m.row(2).transpose())) <= std::tan(M_PI / 3.0) * d &&
         std::abs(s.dot(m.row(1).transpose())) <= std::tan(M_PI / 6.0) * d;
}

Outcome starCoverageCheck()
{
  const std::vector<Vec3> stars = starCatalog(10'000, 9);
  std::mt19937_64 rng(9);
  std::normal_distribution<double> n(0.0, 1.0);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  auto randomRotation = [&] {
    return Rotationd::axisAngle(Vec3(n(rng), n(rng), n(rng)), M_PI * u(rng));
  };

  bool identical = true;
  double worstYaw = 0.0;
  int mismatches = 0;
  for (int p = 0; p < 100; ++p)
  {
    const Rotationd truth = randomRotation();
    identical = identical && starCoverage(truth, truth, stars) == 100.0;

    // Half turn about the view port's up axis (WRF Y), applied in the watch frame.
    const Rotationd turned = Rotationd::axisAngle(Vec3::UnitY(), M_PI) * truth;
    worstYaw = std::max(worstYaw, starCoverage(turned, truth, stars));

    const Rotationd estimate = randomRotation();
    long inTruth = 0;
    long inBoth = 0;
    for (const Vec3& s : stars)
      if (bruteInView(truth, s))
      {
        ++inTruth;
        inBoth += bruteInView(estimate, s) ? 1 : 0;
      }
    const double brute = inTruth == 0 ? 100.0 : 100.0 * inBoth / static_cast<double>(inTruth);
    mismatches += starCoverage(estimate, truth, stars) == brute ? 0 : 1;
  }
  return {identical && worstYaw < 5.0 && mismatches == 0,
          fmt::format("identity 100% {}, worst half-turn coverage {:.2f}%, brute-force mismatches "
                      "{}/100",
                      identical ? "yes" : "no", worstYaw, mismatches)};
}

// ---------------------------------------------------------------------------

std::vector<std::string> rowLines(const MetricsReport& r)
{
  std::ostringstream os;
  writeMetricsCsv(r, os);
  std::vector<std::string> lines;
  std::istringstream is(os.str());
  for (std::string line; std::getline(is, line);)
    if (!line.empty() && line[0] != '#')
      lines.push_back(line);
  return lines;
}

Outcome determinismAndPrefix()
{
  const Scenario s =
      standardScenario(FieldVariant::Corridor, 20.0, MotionVariant::Exercise, 70.0, 700);
  const ImuTrace trace = generate(s);
  RunConfig cfg = runConfigFor(s, RunConfig{});
  cfg.database_mode = DatabaseMode::Auto;
  cfg.detect_window_s = 10.0;
  cfg.star_every = 50;
  cfg.db_error_every = 100;

  std::ostringstream a;
  std::ostringstream b;
  writeMetricsCsv(runScenario(s, trace, cfg), a);
  writeMetricsCsv(runScenario(s, trace, cfg), b);
  const bool identical = a.str() == b.str();

  const std::vector<std::string> full = rowLines(runScenario(s, trace, cfg));
  std::mt19937_64 rng(10);
  std::uniform_int_distribution<std::size_t> cut(600, trace.size());
  int failures = 0;
  for (int i = 0; i < 20; ++i)
  {
    ImuTrace prefix = trace;
    const std::size_t n = cut(rng);
    prefix.samples.resize(n);
    prefix.truth->resize(n);
    const std::vector<std::string> part = rowLines(runScenario(s, prefix, cfg));
    if (part.size() > full.size() || !std::equal(part.begin(), part.end(), full.begin()))
      ++failures;
  }
  return {identical && failures == 0,
          fmt::format("repeat run byte-identical {}, prefix mismatches {}/20",
                      identical ? "yes" : "no", failures)};
}

// ---------------------------------------------------------------------------

Outcome enlargementRatio()
{
  constexpr double dt = 0.020;
  constexpr double sigma = 0.001;  // 1 mm location noise
  bool pass = true;
  double lo = 1.0;
  double hi = 0.0;
  for (int seed = 0; seed < 50; ++seed)
  {
    std::mt19937_64 rng(1100 + seed);
    std::normal_distribution<double> noise(0.0, sigma);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const Vec3 amp(0.1 * u(rng), 0.1 * u(rng), 0.1 * u(rng));
    const double w = 2.0 * M_PI * (0.3 + 0.4 * u(rng));
    auto pos = [&](double t) { return Vec3(amp.x() * std::sin(w * t), amp.y() * std::cos(w * t), amp.z() * std::sin(0.5 * w * t)); };
    auto acc = [&](double t) { return Vec3(-w * w * amp.x() * std::sin(w * t), -w * w * amp.y() * std::cos(w * t), -0.25 * w * w * amp.z() * std::sin(0.5 * w * t)); };

    constexpr int kSamples = 5000;
    std::vector<Vec3> observed(kSamples);
    for (int i = 0; i < kSamples; ++i)
      observed[i] = pos(i * dt) + Vec3(noise(rng), noise(rng), noise(rng));

    auto meanError = [&](int K) {
      double sum = 0.0;
      int count = 0;
      for (int i = K; i + K < kSamples; ++i)
      {
        Particle p;
        p.push(observed[i - K]);
        p.push(observed[i]);
        p.push(observed[i + K]);
        sum += (predictedAcceleration(p, K * dt) - acc(i * dt)).norm();
        ++count;
      }
      return sum / count;
    };
    const double ratio = meanError(5) / meanError(1);
    lo = std::min(lo, ratio);
    hi = std::max(hi, ratio);
    pass = pass && ratio >= 1.0 / 35.0 && ratio <= 1.0 / 18.0;
  }
  return {pass, fmt::format("ratio range over 50 seeds [1/{:.1f}, 1/{:.1f}]", 1.0 / lo, 1.0 / hi)};
}

// ---------------------------------------------------------------------------

Outcome memoryBound()
{
  AnchorVoxelGrid grid(0.1);
  IaiTracker idle;
  for (int i = 0; i < 10; ++i)
    for (int j = 0; j < 10; ++j)
      for (int k = 0; k < 10; ++k)
        grid.update(Vec3(0.05 + 0.1 * i, 0.05 + 0.1 * j, 0.05 + 0.1 * k), Vec3::UnitX(), idle, true);
  const std::size_t bytes = memoryFootprint(grid);
  return {grid.filledVoxels() == 1000 && bytes <= 64 * 1000,
          fmt::format("{} voxels, {} bytes ({:.2f} KB per m^3, {} B/voxel); reference figure 21.63 KB",
                      grid.filledVoxels(), bytes, bytes / 1000.0, kBytesPerVoxel)};
}

} // namespace

int main()
{
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"1 zero-noise sanity", zeroNoiseSanity},
      {"2 distortion resistance", distortionResistance},
      {"3 database convergence", databaseConvergence},
      {"4 adaptive updating", adaptiveUpdating},
      {"5 detection F1", detectionF1},
      {"6 resolution U-shape", resolutionUShape},
      {"7 IAI oracle", iaiOracle},
      {"8 AVOID lambda oracle", avoidOracle},
      {"9 star coverage", starCoverageCheck},
      {"10 determinism and no-lookahead", determinismAndPrefix},
      {"11 particle-filter enlargement ratio", enlargementRatio},
      {"12 memory bound", memoryBound},
  };

  int failed = 0;
  for (const auto& [name, check] : criteria)
  {
    Outcome o;
    try
    {
      o = check();
    }
    catch (const std::exception& e)
    {
      o = {false, fmt::format("exception: {}", e.what())};
    }
    failed += o.pass ? 0 : 1;
    fmt::print("{} criterion {}: {}\n", o.pass ? "PASS" : "FAIL", name, o.detail);
    std::fflush(stdout);
  }
  fmt::print("{} of {} criteria passed\n", criteria.size() - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
