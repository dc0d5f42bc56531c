/*
 *  Copyright (C) 2026 The magvox Authors
 *
 *  SPDX-License-Identifier: Apache-2.0
 *  See the file LICENSE.txt for more information.
 */

#pragma once

#include "magvox/harness.hpp"
#include "magvox/scenario.hpp"

#include <atomic>
#include <cstdint>
#include <exception>
#include <iosfwd>
#include <mutex>
#include <span>
#include <string>
#include <thread>
#include <vector>

namespace magvox
{

/// Number of worker threads to use when the caller passes 0.
unsigned defaultThreads();

/**
 * Run fn(i) for i in [0, n) on a pool of threads.
 *
 * Each index is handled exactly once and results are expected to be written
 * to slot i, so the outcome does not depend on scheduling. The first
 * exception thrown by any task is rethrown after all workers stop.
 */
template <typename Fn>
void parallelFor(std::size_t n, Fn&& fn, unsigned threads = 0)
{
  if (threads == 0)
    threads = defaultThreads();
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, n));
  if (threads <= 1)
  {
    for (std::size_t i = 0; i < n; ++i)
      fn(i);
    return;
  }

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failureMutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++)
    {
      try
      {
        fn(i);
      }
      catch (...)
      {
        const std::lock_guard lock(failureMutex);
        if (!failure)
          failure = std::current_exception();
        next = n;
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned k = 0; k < threads; ++k)
    pool.emplace_back(worker);
  for (std::thread& th : pool)
    th.join();
  if (failure)
    std::rethrow_exception(failure);
}

/// Run configuration matched to a scenario (nominal dip and magnitude, per-scenario seed).
RunConfig runConfigFor(const Scenario& scenario, RunConfig base);

/// Run one estimator on one scenario with the true field attached for the database metric.
MetricsReport runScenario(const Scenario& scenario, const ImuTrace& trace, const RunConfig& cfg);

struct CompareRow
{
  std::string scenario;
  std::uint64_t seed = 0;
  Estimator estimator = Estimator::Mdr;
  MetricsReport report;  ///< aggregates only, per-step rows dropped
};

/// Every (scenario x estimator) cell; rows ordered scenario-major.
std::vector<CompareRow> compareEstimators(std::span<const Scenario> scenarios,
                                          std::span<const Estimator> estimators,
                                          const RunConfig& base,
                                          unsigned threads = 0);

void writeCompareCsv(std::span<const CompareRow> rows, std::ostream& out);

struct SweepRow
{
  double l_db = 0.0;
  double mean_orientation_error_deg = 0.0;
  double mean_db_error_deg = 0.0;
  double mean_voxels = 0.0;
  int runs = 0;
};

/// MDR over each resolution, averaged over the scenarios; rows keep the order of `lDb`.
std::vector<SweepRow> resolutionSweep(std::span<const Scenario> scenarios,
                                      std::span<const double> lDb,
                                      const RunConfig& base,
                                      unsigned threads = 0);

void writeSweepCsv(std::span<const SweepRow> rows, std::ostream& out);

struct ClassScores
{
  long tp = 0;
  long fp = 0;
  long fn = 0;
  long tn = 0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;

  void add(bool predicted, bool label);
  void finish();
};

struct DetectionCase
{
  std::uint64_t seed = 0;
  FieldVariant variant = FieldVariant::Uniform;
  double amplitude_deg = 0.0;
  double base_magnitude = 50.0;
  double true_distortion_deg = 0.0; ///< along the trajectory in the detection window
  bool label = false;               ///< distortion-free
  bool a = false;
  bool b = false;
};

/// Positive class is "distortion-free".
struct DetectionReport
{
  ClassScores a;
  ClassScores b;
  ClassScores combined;
  std::vector<DetectionCase> cases;
};

/**
 * Balanced labeled detection suite. Candidates draw the field variant
 * uniformly (uniform, smooth, corridor) and, for distorted variants, a target
 * distortion in [1, 36] degrees; they are kept until each class holds half of
 * the scenarios. The label
 * is the distortion of the true field at the wrist positions of the detection
 * window.
 */
DetectionReport detectionBenchmark(int nScenarios,
                                   std::uint64_t seed,
                                   const DetectorConfig& cfg = {},
                                   double windowSeconds = 30.0,
                                   unsigned threads = 0);

void writeDetectionCsv(const DetectionReport& report, std::ostream& out);

struct AdaptiveTrial
{
  double naive_error_deg = 0.0;
  double adaptive_error_deg = 0.0;
  long voxels = 0;
};

/**
 * Database built along the true trajectory of a trace with anchors perturbed
 * by a random rotation whose angle grows with the inertial angular index:
 * angle ~ |N(0, base_noise_deg + iai_noise_deg * iai)|.
 */
struct AdaptiveExperiment
{
  double base_noise_deg = 2.0;
  double iai_noise_deg = 30.0;
  DatabaseConfig database;
};

AdaptiveTrial adaptiveVsNaive(const Scenario& scenario,
                              const ImuTrace& trace,
                              const AdaptiveExperiment& exp,
                              std::uint64_t noiseSeed);

} // namespace magvox
