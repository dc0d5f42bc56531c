/*
 *  Copyright (C) 2026 The magvox Authors
 *
 *  SPDX-License-Identifier: Apache-2.0
 *  See the file LICENSE.txt for more information.
 */

#include "magvox/experiments.hpp"

#include "magvox/baselines.hpp"
#include "magvox/detector.hpp"

#include <cmath>
#include <ostream>
#include <random>

#include <fmt/format.h>

namespace magvox
{

unsigned defaultThreads()
{
  return std::max(1u, std::thread::hardware_concurrency());
}

RunConfig runConfigFor(const Scenario& scenario, RunConfig base)
{
  base.dip_deg = dipAngle(scenario.field.base_direction);
  base.avoid.theta0 = base.dip_deg;
  base.avoid.M0 = scenario.field.base_magnitude;
  base.arm = scenario.arm;
  base.seed = deriveSeed(scenario.seed, 5);
  return base;
}

MetricsReport runScenario(const Scenario& scenario, const ImuTrace& trace, const RunConfig& cfg)
{
  const MagneticField field(scenario.field);
  return runPipeline(trace, cfg, [&field](const Vec3& x) { return field.directionAt(x); });
}

namespace
{
std::vector<ImuTrace> generateAll(std::span<const Scenario> scenarios, unsigned threads)
{
  std::vector<ImuTrace> traces(scenarios.size());
  parallelFor(scenarios.size(), [&](std::size_t i) { traces[i] = generate(scenarios[i]); }, threads);
  return traces;
}

std::string scenarioLabel(const Scenario& s)
{
  return fmt::format("{}-{:g}-{}", toString(s.field.variant), s.field.distortion_amplitude,
                     toString(s.motion.variant));
}
} // namespace

std::vector<CompareRow> compareEstimators(std::span<const Scenario> scenarios,
                                          std::span<const Estimator> estimators,
                                          const RunConfig& base,
                                          unsigned threads)
{
  const std::vector<ImuTrace> traces = generateAll(scenarios, threads);
  const std::size_t nEst = estimators.size();
  std::vector<CompareRow> rows(scenarios.size() * nEst);

  parallelFor(
      rows.size(),
      [&](std::size_t cell) {
        const std::size_t s = cell / nEst;
        RunConfig cfg = runConfigFor(scenarios[s], base);
        cfg.estimator = estimators[cell % nEst];
        cfg.record_steps = false;
        CompareRow& row = rows[cell];
        row.scenario = scenarioLabel(scenarios[s]);
        row.seed = scenarios[s].seed;
        row.estimator = cfg.estimator;
        row.report = runScenario(scenarios[s], traces[s], cfg);
      },
      threads);
  return rows;
}

void writeCompareCsv(std::span<const CompareRow> rows, std::ostream& out)
{
  out << "scenario,seed,estimator,mean_orientation_error_deg,mean_location_error_m,"
         "final_db_error_deg,db_voxels,mean_lambda,database_active\n";
  for (const CompareRow& r : rows)
  {
    const MetricsReport& m = r.report;
    out << fmt::format("{},{},{},{:.6f},{:.6f},{:.6f},{},{:.6f},{}\n", r.scenario, r.seed,
                       toString(r.estimator), m.mean_orientation_error_deg,
                       m.mean_location_error_m, m.final_db_error_deg, m.db_voxels, m.mean_lambda,
                       m.database_active ? 1 : 0);
  }
}

std::vector<SweepRow> resolutionSweep(std::span<const Scenario> scenarios,
                                      std::span<const double> lDb,
                                      const RunConfig& base,
                                      unsigned threads)
{
  const std::vector<ImuTrace> traces = generateAll(scenarios, threads);
  const std::size_t nScen = scenarios.size();
  std::vector<MetricsReport> reports(lDb.size() * nScen);

  parallelFor(
      reports.size(),
      [&](std::size_t cell) {
        const std::size_t s = cell % nScen;
        RunConfig cfg = runConfigFor(scenarios[s], base);
        cfg.estimator = Estimator::Mdr;
        cfg.database.l_db = lDb[cell / nScen];
        cfg.record_steps = false;
        reports[cell] = runScenario(scenarios[s], traces[s], cfg);
      },
      threads);

  std::vector<SweepRow> rows(lDb.size());
  for (std::size_t r = 0; r < lDb.size(); ++r)
  {
    SweepRow& row = rows[r];
    row.l_db = lDb[r];
    for (std::size_t s = 0; s < nScen; ++s)
    {
      const MetricsReport& m = reports[r * nScen + s];
      row.mean_orientation_error_deg += m.mean_orientation_error_deg;
      row.mean_db_error_deg += std::isnan(m.final_db_error_deg) ? 0.0 : m.final_db_error_deg;
      row.mean_voxels += static_cast<double>(m.db_voxels);
    }
    row.runs = static_cast<int>(nScen);
    if (nScen > 0)
    {
      const auto n = static_cast<double>(nScen);
      row.mean_orientation_error_deg /= n;
      row.mean_db_error_deg /= n;
      row.mean_voxels /= n;
    }
  }
  return rows;
}

void writeSweepCsv(std::span<const SweepRow> rows, std::ostream& out)
{
  out << "l_db,mean_orientation_error_deg,mean_db_error_deg,mean_voxels,runs\n";
  for (const SweepRow& r : rows)
    out << fmt::format("{:g},{:.6f},{:.6f},{:.2f},{}\n", r.l_db, r.mean_orientation_error_deg,
                       r.mean_db_error_deg, r.mean_voxels, r.runs);
}

void ClassScores::add(bool predicted, bool label)
{
  if (predicted && label)
    ++tp;
  else if (predicted)
    ++fp;
  else if (label)
    ++fn;
  else
    ++tn;
}

void ClassScores::finish()
{
  const auto ratio = [](long num, long den) {
    return den > 0 ? static_cast<double>(num) / static_cast<double>(den) : 0.0;
  };
  precision = ratio(tp, tp + fp);
  recall = ratio(tp, tp + fn);
  f1 = precision + recall > 0.0 ? 2.0 * precision * recall / (precision + recall) : 0.0;
}

namespace
{
DetectionCase detectionCandidate(std::uint64_t caseSeed, const DetectorConfig& cfg, double windowSeconds)
{
  constexpr MotionVariant kMotions[] = {MotionVariant::PointDirections, MotionVariant::DrawLines,
                                        MotionVariant::WriteLetters, MotionVariant::Exercise};
  const double initWindow = FilterConfig{}.init_window;

  std::mt19937_64 rng(deriveSeed(caseSeed, 9));
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  constexpr FieldVariant kFields[] = {FieldVariant::Uniform, FieldVariant::SmoothDistorted,
                                      FieldVariant::Corridor};
  const FieldVariant variant = kFields[static_cast<std::size_t>(3.0 * unit(rng)) % 3];
  const double amplitude = variant == FieldVariant::Uniform ? 0.0 : 1.0 + 35.0 * unit(rng);
  const MotionVariant motion = kMotions[static_cast<std::size_t>(4.0 * unit(rng)) % 4];

  Scenario s =
      standardScenario(variant, amplitude, motion, initWindow + windowSeconds + 1.0, caseSeed);
  s.field.base_magnitude = 45.0 + 10.0 * unit(rng);

  const ImuTrace trace = generate(s);
  const MagneticField field(s.field);
  std::vector<double> magnitudes;
  std::vector<Vec3> directions;
  for (std::size_t k = 0; k < trace.size(); ++k)
  {
    const double t = trace.samples[k].t - trace.samples.front().t;
    if (t < initWindow || t >= initWindow + windowSeconds)
      continue;
    magnitudes.push_back(trace.samples[k].mag.norm());
    directions.push_back(field.directionAt((*trace.truth)[k].location));
  }

  DetectionCase c;
  c.seed = caseSeed;
  c.variant = variant;
  c.amplitude_deg = amplitude;
  c.base_magnitude = s.field.base_magnitude;
  c.true_distortion_deg = distortionMagnitude(directions);
  c.label = c.true_distortion_deg < cfg.distortion_free_threshold;
  c.a = criterionA(magnitudes, cfg);
  c.b = criterionB(magnitudes, cfg);
  return c;
}
} // namespace

DetectionReport detectionBenchmark(int nScenarios,
                                   std::uint64_t seed,
                                   const DetectorConfig& cfg,
                                   double windowSeconds,
                                   unsigned threads)
{
  if (nScenarios < 2 || nScenarios % 2 != 0)
    throw ConfigError("detection benchmark needs a positive even number of scenarios");
  cfg.validate();

  // Candidates are drawn in batches and accepted in index order until both
  // classes are full, so the suite does not depend on scheduling.
  const std::size_t perClass = static_cast<std::size_t>(nScenarios) / 2;
  std::size_t clean = 0;
  std::size_t distorted = 0;
  DetectionReport report;
  for (std::size_t first = 0; clean < perClass || distorted < perClass;
       first += static_cast<std::size_t>(nScenarios))
  {
    if (first > 100 * static_cast<std::size_t>(nScenarios))
      throw DataError("detection benchmark cannot balance the two classes");
    std::vector<DetectionCase> batch(static_cast<std::size_t>(nScenarios));
    parallelFor(
        batch.size(),
        [&](std::size_t i) {
          batch[i] = detectionCandidate(deriveSeed(seed, 1000 + first + i), cfg, windowSeconds);
        },
        threads);
    for (const DetectionCase& c : batch)
    {
      std::size_t& count = c.label ? clean : distorted;
      if (count < perClass)
      {
        ++count;
        report.cases.push_back(c);
      }
    }
  }

  for (const DetectionCase& c : report.cases)
  {
    report.a.add(c.a, c.label);
    report.b.add(c.b, c.label);
    report.combined.add(c.a && c.b, c.label);
  }
  report.a.finish();
  report.b.finish();
  report.combined.finish();
  return report;
}

void writeDetectionCsv(const DetectionReport& report, std::ostream& out)
{
  out << "criterion,tp,fp,fn,tn,precision,recall,f1\n";
  const auto line = [&out](std::string_view name, const ClassScores& s) {
    out << fmt::format("{},{},{},{},{},{:.4f},{:.4f},{:.4f}\n", name, s.tp, s.fp, s.fn, s.tn,
                       s.precision, s.recall, s.f1);
  };
  line("A", report.a);
  line("B", report.b);
  line("A+B", report.combined);
}

AdaptiveTrial adaptiveVsNaive(const Scenario& scenario,
                              const ImuTrace& trace,
                              const AdaptiveExperiment& exp,
                              std::uint64_t noiseSeed)
{
  if (!trace.hasTruth())
    throw MissingGroundTruth();

  const MagneticField field(scenario.field);
  const auto trueField = [&field](const Vec3& x) { return field.directionAt(x); };
  std::mt19937_64 rng(noiseSeed);
  std::normal_distribution<double> normal(0.0, 1.0);

  AnchorVoxelGrid naive(exp.database.l_db);
  AnchorVoxelGrid adaptive(exp.database.l_db);
  IaiTracker iai = exp.database.iai;

  for (std::size_t k = 0; k < trace.size(); ++k)
  {
    iai = iaiStep(iai, trace.samples[k].gyro);
    const Vec3& x = (*trace.truth)[k].location;
    const Vec3 n = trueField(x);

    // Random axis perpendicular to the true direction.
    Vec3 axis(normal(rng), normal(rng), normal(rng));
    axis -= axis.dot(n) * n;
    if (axis.norm() < 1e-9)
      axis = n.unitOrthogonal();
    const double sigma = exp.base_noise_deg + exp.iai_noise_deg * iai.iai;
    const double angle = deg2rad(std::abs(sigma * normal(rng)));
    const Vec3 anchor = Rotationd::axisAngle(axis.normalized(), angle).apply(n);

    naive.update(x, anchor, iai, false);
    adaptive.update(x, anchor, iai, true);
  }

  AdaptiveTrial trial;
  trial.naive_error_deg = databaseError(naive, trueField);
  trial.adaptive_error_deg = databaseError(adaptive, trueField);
  trial.voxels = static_cast<long>(naive.filledVoxels());
  return trial;
}

} // namespace magvox
