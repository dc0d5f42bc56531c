/*
 *  Copyright (C) 2026 The magvox Authors
 *
 *  SPDX-License-Identifier: Apache-2.0
 *  See the file LICENSE.txt for more information.
 */

#pragma once

#include "magvox/baselines.hpp"
#include "magvox/cfilter.hpp"
#include "magvox/config.hpp"
#include "magvox/detector.hpp"
#include "magvox/imu_types.hpp"
#include "magvox/magdb.hpp"
#include "magvox/pfilter.hpp"

#include <cstdint>
#include <deque>
#include <iosfwd>
#include <optional>
#include <random>
#include <span>
#include <string_view>
#include <vector>

namespace magvox
{

enum class Estimator
{
  Mdr,     ///< complementary filter + anchor database
  Muse,    ///< complementary filter + constant anchor
  Avoid,   ///< constant anchor, magnetometer weight scaled by (1 - lambda)
  GyroAcc, ///< no magnetic calibration
};

enum class DatabaseMode
{
  Auto,
  On,
  Off,
};

/// How the database query obtains a location before the current one is known.
enum class DeadlockPolicy
{
  PreviousStep, ///< last particle-filter output, interpolated on blank steps
  DoubleFilter, ///< run the filter once without the database, locate, then run again
};

std::string_view toString(Estimator e);
std::string_view toString(DatabaseMode m);
std::string_view toString(DeadlockPolicy p);
Estimator parseEstimator(std::string_view s);
DatabaseMode parseDatabaseMode(std::string_view s);
DeadlockPolicy parseDeadlockPolicy(std::string_view s);

struct DatabaseConfig
{
  double l_db = AnchorVoxelGrid::kDefaultResolution;
  bool adaptive = true;
  IaiTracker iai;
};

struct RunConfig
{
  Estimator estimator = Estimator::Mdr;
  FilterConfig filter;
  DetectorConfig detector;
  double detect_window_s = 30.0;
  DatabaseConfig database;
  DatabaseMode database_mode = DatabaseMode::Auto;
  DeadlockPolicy deadlock = DeadlockPolicy::PreviousStep;
  PfConfig pf;
  ArmModel arm;
  AvoidConfig avoid;
  double dip_deg = 60.0;          ///< nominal dip of the constant anchor
  std::uint64_t seed = 1;

  double eval_start_s = 0.0;      ///< aggregates use steps with t >= eval_start_s
  int star_every = 0;             ///< star coverage every N steps (0 = off)
  int star_count = 2000;
  int db_error_every = 0;         ///< database error every N steps (0 = only at the end)
  bool record_steps = true;

  void validate() const;
};

/// Build a RunConfig from flat keys (see README for the list).
RunConfig runConfigFromConfig(const KeyValueConfig& cfg);

struct StepRow
{
  long step = 0;
  double t = 0.0;
  double orientation_error_deg = 0.0;
  double location_error_m = 0.0;   ///< NaN when no location is tracked
  double db_error_deg = 0.0;       ///< NaN when not computed on this step
  long db_voxels = 0;
  double iai = 0.0;
  double lambda = 0.0;             ///< NaN unless the estimator is AVOID
  double star_coverage_pct = 0.0;  ///< NaN when not computed on this step
  Rotationd estimate;
  std::optional<Vec3> anchor;
};

struct MetricsReport
{
  std::vector<StepRow> steps;

  double mean_orientation_error_deg = 0.0;
  double mean_location_error_m = 0.0;
  double final_db_error_deg = 0.0;
  long db_voxels = 0;
  double mean_visits_per_voxel = 0.0;
  double mean_lambda = 0.0;
  double mean_star_coverage_pct = 0.0;
  std::size_t memory_bytes = 0;
  bool database_active = false;
  double database_enabled_at = 0.0; ///< NaN when the database never activated
  long aggregate_steps = 0;

  /// Final state of the anchor database (empty unless MDR activated it).
  AnchorVoxelGrid database;

  /// Not part of the CSV (non-deterministic).
  double wall_clock_per_sim_second = 0.0;
};

/**
 * Keeps the wrist location estimate: a particle filter every K_pf steps and
 * linear extrapolation from the last two filter outputs in between.
 */
class LocationTracker
{
public:
  LocationTracker(const ArmModel& arm, const PfConfig& cfg, std::uint64_t seed);

  /// Feed one step (orientation after fusion and the raw sample); returns the location at t.
  Vec3 step(const Rotationd& theta, const ImuSample& sample);

  bool hasLocation() const { return m_outputs > 0; }
  const Vec3& lastLocation() const { return m_last; }
  const ParticleSet& particles() const { return m_set; }

private:
  Vec3 targetAcceleration() const;

  ArmModel m_arm;
  PfConfig m_cfg;
  std::mt19937_64 m_rng;
  ParticleSet m_set;
  std::deque<Vec3> m_linearAccel;
  long m_steps = 0;
  int m_outputs = 0;
  double m_t1 = 0.0;
  double m_t2 = 0.0;
  Vec3 m_x1 = Vec3::Zero();
  Vec3 m_x2 = Vec3::Zero();
  Vec3 m_last = Vec3::Zero();
};

/// Camera axis = WRF X, up = WRF Y, right = WRF Z; 120 x 60 degree view port.
bool inViewPort(const Rotationd& orientation, const Vec3& star);

/// Percentage of stars in the true view port that are also in the estimated one.
double starCoverage(const Rotationd& estimate, const Rotationd& truth, std::span<const Vec3> stars);

/**
 * Run one estimator over a trace.
 *
 * The first init_window seconds initialize the filter and produce no rows.
 * `trueField`, when given, enables the database-error metric.
 */
MetricsReport runPipeline(const ImuTrace& trace,
                          const RunConfig& cfg,
                          const FieldDirectionFn& trueField = {});

/// Recompute the aggregate block from per-step rows.
MetricsReport aggregateFromRows(std::span<const StepRow> rows, double evalStart);

/// Per-step CSV followed by `# key=value` aggregate lines.
void writeMetricsCsv(const MetricsReport& report, std::ostream& out);

} // namespace magvox
