/*
 *  Copyright (C) 2026 The magvox Authors
 *
 *  SPDX-License-Identifier: Apache-2.0
 *  See the file LICENSE.txt for more information.
 */

#include "magvox/harness.hpp"

#include "magvox/scenario.hpp"
#include "magvox/simgen.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <ostream>

#include <fmt/format.h>

namespace magvox
{
namespace
{
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

/// Running means over the aggregation window.
struct Aggregator
{
  double evalStart = 0.0;
  double orientationSum = 0.0;
  long orientationCount = 0;
  double locationSum = 0.0;
  long locationCount = 0;
  double lambdaSum = 0.0;
  long lambdaCount = 0;
  double starSum = 0.0;
  long starCount = 0;
  double lastDbError = kNaN;
  long lastVoxels = 0;

  void add(const StepRow& row)
  {
    if (!std::isnan(row.db_error_deg))
      lastDbError = row.db_error_deg;
    lastVoxels = row.db_voxels;
    if (row.t < evalStart)
      return;
    orientationSum += row.orientation_error_deg;
    ++orientationCount;
    if (!std::isnan(row.location_error_m))
    {
      locationSum += row.location_error_m;
      ++locationCount;
    }
    if (!std::isnan(row.lambda))
    {
      lambdaSum += row.lambda;
      ++lambdaCount;
    }
    if (!std::isnan(row.star_coverage_pct))
    {
      starSum += row.star_coverage_pct;
      ++starCount;
    }
  }

  void finish(MetricsReport& r) const
  {
    auto mean = [](double sum, long n) { return n > 0 ? sum / static_cast<double>(n) : kNaN; };
    r.mean_orientation_error_deg = mean(orientationSum, orientationCount);
    r.mean_location_error_m = mean(locationSum, locationCount);
    r.mean_lambda = mean(lambdaSum, lambdaCount);
    r.mean_star_coverage_pct = mean(starSum, starCount);
    r.final_db_error_deg = lastDbError;
    r.db_voxels = lastVoxels;
    r.aggregate_steps = orientationCount;
  }
};

std::string number(double v)
{
  if (std::isnan(v))
    return "nan";
  return fmt::format("{:.9f}", v);
}
} // namespace

std::string_view toString(Estimator e)
{
  switch (e)
  {
  case Estimator::Mdr:
    return "mdr";
  case Estimator::Muse:
    return "muse";
  case Estimator::Avoid:
    return "avoid";
  case Estimator::GyroAcc:
    return "gyro-acc";
  }
  return "?";
}

std::string_view toString(DatabaseMode m)
{
  switch (m)
  {
  case DatabaseMode::Auto:
    return "auto";
  case DatabaseMode::On:
    return "on";
  case DatabaseMode::Off:
    return "off";
  }
  return "?";
}

std::string_view toString(DeadlockPolicy p)
{
  return p == DeadlockPolicy::PreviousStep ? "previous" : "double";
}

Estimator parseEstimator(std::string_view s)
{
  for (Estimator e : {Estimator::Mdr, Estimator::Muse, Estimator::Avoid, Estimator::GyroAcc})
    if (s == toString(e))
      return e;
  throw ConfigError(fmt::format("unknown estimator '{}'", s));
}

DatabaseMode parseDatabaseMode(std::string_view s)
{
  for (DatabaseMode m : {DatabaseMode::Auto, DatabaseMode::On, DatabaseMode::Off})
    if (s == toString(m))
      return m;
  throw ConfigError(fmt::format("unknown database mode '{}'", s));
}

DeadlockPolicy parseDeadlockPolicy(std::string_view s)
{
  for (DeadlockPolicy p : {DeadlockPolicy::PreviousStep, DeadlockPolicy::DoubleFilter})
    if (s == toString(p))
      return p;
  throw ConfigError(fmt::format("unknown deadlock policy '{}'", s));
}

void RunConfig::validate() const
{
  filter.validate();
  detector.validate();
  database.iai.validate();
  pf.validate();
  arm.validate();
  avoid.validate();
  if (!(database.l_db > 0.0))
    throw ConfigError("l_db must be positive");
  if (!(detect_window_s > 0.0))
    throw ConfigError("detect_window_s must be positive");
  if (star_every < 0 || db_error_every < 0 || star_count < 1)
    throw ConfigError("metric intervals must be non-negative");
}

RunConfig runConfigFromConfig(const KeyValueConfig& cfg)
{
  RunConfig r;
  r.estimator = parseEstimator(cfg.getString("estimator", "mdr"));
  r.seed = cfg.getUint("seed", r.seed);

  r.filter.k_a = cfg.getDouble("k_a", r.filter.k_a);
  r.filter.k_m = cfg.getDouble("k_m", r.filter.k_m);
  r.filter.static_boundary = cfg.getDouble("static_boundary", r.filter.static_boundary);
  r.filter.K_c = static_cast<int>(cfg.getInt("K_c", r.filter.K_c));
  r.filter.K_g = static_cast<int>(cfg.getInt("K_g", r.filter.K_g));
  r.filter.init_window = cfg.getDouble("init_window", r.filter.init_window);
  r.filter.rescale_with_K_c = cfg.getBool("rescale_with_K_c", r.filter.rescale_with_K_c);

  r.detector.mag_lo = cfg.getDouble("mag_lo", r.detector.mag_lo);
  r.detector.mag_hi = cfg.getDouble("mag_hi", r.detector.mag_hi);
  r.detector.rel_var_max = cfg.getDouble("rel_var_max", r.detector.rel_var_max);
  r.detect_window_s = cfg.getDouble("detect_window_s", r.detect_window_s);

  r.database.l_db = cfg.getDouble("l_db", r.database.l_db);
  r.database.adaptive = cfg.getBool("adaptive", r.database.adaptive);
  r.database.iai.k_iai = cfg.getDouble("k_iai", r.database.iai.k_iai);
  r.database.iai.iai_0 = cfg.getDouble("iai_0", r.database.iai.iai_0);
  r.database.iai.W = cfg.getDouble("W", r.database.iai.W);
  r.database_mode = parseDatabaseMode(cfg.getString("database", "auto"));
  r.deadlock = parseDeadlockPolicy(cfg.getString("deadlock", "previous"));

  r.pf.n_particles = static_cast<int>(cfg.getInt("n_particles", r.pf.n_particles));
  r.pf.K_pf = static_cast<int>(cfg.getInt("K_pf", r.pf.K_pf));
  r.pf.sigma_accel = cfg.getDouble("sigma_accel", r.pf.sigma_accel);
  r.arm.upper_arm_len = cfg.getDouble("arm.upper", r.arm.upper_arm_len);
  r.arm.forearm_len = cfg.getDouble("arm.forearm", r.arm.forearm_len);

  r.dip_deg = cfg.getDouble("dip_deg", r.dip_deg);
  r.avoid.theta0 = cfg.getDouble("theta0", r.dip_deg);
  r.avoid.M0 = cfg.getDouble("M0", r.avoid.M0);

  r.eval_start_s = cfg.getDouble("eval_start_s", r.eval_start_s);
  r.star_every = static_cast<int>(cfg.getInt("star_every", r.star_every));
  r.star_count = static_cast<int>(cfg.getInt("star_count", r.star_count));
  r.db_error_every = static_cast<int>(cfg.getInt("db_error_every", r.db_error_every));

  r.validate();
  return r;
}

LocationTracker::LocationTracker(const ArmModel& arm, const PfConfig& cfg, std::uint64_t seed)
  : m_arm(arm), m_cfg(cfg), m_rng(seed)
{
}

Vec3 LocationTracker::targetAcceleration() const
{
  // The second difference over +/-K samples equals a triangular-weighted mean of
  // the acceleration around the middle sample.
  const int k = m_cfg.K_pf;
  const auto n = static_cast<int>(m_linearAccel.size());
  if (n < 2 * k + 1)
  {
    Vec3 mean = Vec3::Zero();
    for (const Vec3& a : m_linearAccel)
      mean += a;
    return mean / std::max(n, 1);
  }
  Vec3 acc = Vec3::Zero();
  for (int j = -k; j <= k; ++j)
  {
    const double w = static_cast<double>(k - std::abs(j)) / (k * k);
    acc += w * m_linearAccel[static_cast<std::size_t>(n - 1 - k + j)];
  }
  return acc;
}

Vec3 LocationTracker::step(const Rotationd& theta, const ImuSample& sample)
{
  m_linearAccel.push_back(theta.apply(sample.accel) - kGravity * grf::up);
  while (static_cast<int>(m_linearAccel.size()) > 2 * m_cfg.K_pf + 1)
    m_linearAccel.pop_front();

  const bool first = m_steps == 0;
  ++m_steps;

  if (first || m_steps % m_cfg.K_pf == 0)
  {
    if (first)
      m_set = initParticles(theta, m_arm, m_cfg, m_rng);
    else
      m_set = pfStep(std::move(m_set), theta, targetAcceleration(), m_arm, m_cfg, m_rng);

    const Vec3 x = estimateLocation(m_set);
    m_x1 = m_x2;
    m_t1 = m_t2;
    m_x2 = x;
    m_t2 = sample.t;
    ++m_outputs;
    m_last = x;
    return x;
  }

  m_last = m_outputs >= 2 ? interpolateBlankSteps(m_x1, m_t1, m_x2, m_t2, sample.t) : m_x2;
  return m_last;
}

bool inViewPort(const Rotationd& orientation, const Vec3& star)
{
  const Vec3 camera = orientation.apply(Vec3::UnitX());
  const Vec3 up = orientation.apply(Vec3::UnitY());
  const Vec3 right = orientation.apply(Vec3::UnitZ());
  const double depth = star.dot(camera);
  if (depth <= 0.0)
    return false;
  const double horizontal = std::atan2(std::abs(star.dot(right)), depth);
  const double vertical = std::atan2(std::abs(star.dot(up)), depth);
  return horizontal <= deg2rad(60.0) && vertical <= deg2rad(30.0);
}

double starCoverage(const Rotationd& estimate, const Rotationd& truth, std::span<const Vec3> stars)
{
  long inTruth = 0;
  long inBoth = 0;
  for (const Vec3& s : stars)
  {
    if (!inViewPort(truth, s))
      continue;
    ++inTruth;
    if (inViewPort(estimate, s))
      ++inBoth;
  }
  if (inTruth == 0)
    return 100.0;
  return 100.0 * static_cast<double>(inBoth) / static_cast<double>(inTruth);
}

namespace
{
/// Complementary filter driven by the anchor database, with its own location tracker.
struct DatabaseLane
{
  FilterState state;
  AnchorVoxelGrid grid;
  LocationTracker tracker;

  DatabaseLane(const FilterState& init, const RunConfig& cfg)
    : state(init), grid(cfg.database.l_db, Vec3::Zero()), tracker(cfg.arm, cfg.pf, cfg.seed)
  {
  }

  /// One step of query -> fuse -> locate -> update; returns the anchor used and the location.
  std::pair<std::optional<Vec3>, Vec3> step(const ImuSample& sample,
                                            const IaiTracker& iai,
                                            const RunConfig& cfg)
  {
    std::optional<Vec3> anchor;
    std::optional<Vec3> location;
    if (cfg.deadlock == DeadlockPolicy::PreviousStep)
    {
      if (tracker.hasLocation())
        anchor = grid.query(tracker.lastLocation());
    }
    else
    {
      const FilterState tentative = fuseStep(state, sample, std::nullopt, cfg.filter);
      location = tracker.step(tentative.theta, sample);
      anchor = grid.query(*location);
    }

    state = fuseStep(state, sample, anchor, cfg.filter);
    if (!location)
      location = tracker.step(state.theta, sample);
    if (sample.mag.norm() > 1e-9)
      grid.update(*location, computeAnchor(sample.mag, state.theta), iai, cfg.database.adaptive);
    return {anchor, *location};
  }
};
} // namespace

MetricsReport runPipeline(const ImuTrace& trace, const RunConfig& cfg, const FieldDirectionFn& trueField)
{
  cfg.validate();
  validateTrace(trace);
  const auto wallStart = std::chrono::steady_clock::now();

  const auto& samples = trace.samples;
  const double dt = trace.sampleInterval();
  const auto initCount = static_cast<std::size_t>(std::llround(cfg.filter.init_window / dt));
  if (samples.size() < initCount || initCount == 0)
    throw DataError("trace is shorter than the initialization window");

  FilterState state =
      initialize(std::span<const ImuSample>(samples.data(), initCount), cfg.filter);

  const ConstantAnchorSource constantAnchor = museAnchorSource(cfg.dip_deg);
  const bool isMdr = cfg.estimator == Estimator::Mdr;
  const bool wantTruth = trace.hasTruth();

  IaiTracker iai = cfg.database.iai;

  // In auto mode the database lane runs in the shadow of the constant-anchor
  // filter until the detector decides; it is adopted only if distortion is found.
  std::optional<DatabaseLane> lane;
  if (isMdr && cfg.database_mode != DatabaseMode::Off)
    lane.emplace(state, cfg);
  bool dbActive = isMdr && cfg.database_mode == DatabaseMode::On;
  bool detectionPending = isMdr && cfg.database_mode == DatabaseMode::Auto;
  const double detectEnd = samples[initCount - 1].t + cfg.detect_window_s;
  std::vector<double> detectMagnitudes;

  std::vector<Vec3> stars;
  if (cfg.star_every > 0 && wantTruth)
    stars = starCatalog(cfg.star_count, cfg.seed);

  MetricsReport report;
  report.database_enabled_at = dbActive ? samples[initCount - 1].t : kNaN;
  Aggregator agg;
  agg.evalStart = cfg.eval_start_s;
  if (cfg.record_steps)
    report.steps.reserve(samples.size() - initCount);

  const AnchorVoxelGrid emptyGrid(cfg.database.l_db);

  for (std::size_t k = initCount; k < samples.size(); ++k)
  {
    const ImuSample& sample = samples[k];
    iai = iaiStep(iai, sample.gyro);

    std::optional<Vec3> anchor;
    double lambda = kNaN;
    std::optional<Vec3> location;

    std::pair<std::optional<Vec3>, Vec3> laneOut;
    if (lane)
      laneOut = lane->step(sample, iai, cfg);

    if (dbActive)
    {
      state = lane->state;
      anchor = laneOut.first;
      location = laneOut.second;
    }
    else
    {
      FilterConfig stepCfg = cfg.filter;
      switch (cfg.estimator)
      {
      case Estimator::GyroAcc:
        break;
      case Estimator::Avoid:
        anchor = constantAnchor.anchor();
        lambda = sample.mag.norm() > 1e-9 ? avoidLambda(sample.mag, state.theta, cfg.avoid) : 1.0;
        stepCfg.k_m = avoidWeight(lambda, cfg.filter.k_m);
        break;
      case Estimator::Muse:
      case Estimator::Mdr:
        anchor = constantAnchor.anchor();
        break;
      }
      state = fuseStep(state, sample, anchor, stepCfg);
    }

    if (detectionPending)
    {
      detectMagnitudes.push_back(sample.mag.norm());
      if (sample.t >= detectEnd - 1e-9)
      {
        detectionPending = false;
        dbActive = !isDistortionFree(detectMagnitudes, cfg.detector);
        if (dbActive)
        {
          // Takes effect from the next step; this step's output stays causal.
          report.database_enabled_at = sample.t;
        }
        else
          lane.reset();
      }
    }

    const AnchorVoxelGrid& grid = dbActive ? lane->grid : emptyGrid;

    StepRow row;
    row.step = static_cast<long>(k);
    row.t = sample.t;
    row.estimate = state.theta;
    row.anchor = anchor;
    row.iai = iai.iai;
    row.lambda = lambda;
    row.db_voxels = static_cast<long>(grid.filledVoxels());
    row.orientation_error_deg = wantTruth ? orientationError(state.theta, (*trace.truth)[k].orientation) : kNaN;
    row.location_error_m =
        (wantTruth && location) ? (*location - (*trace.truth)[k].location).norm() : kNaN;

    row.db_error_deg = kNaN;
    if (trueField && !grid.empty() && cfg.db_error_every > 0 &&
        (k - initCount + 1) % static_cast<std::size_t>(cfg.db_error_every) == 0)
      row.db_error_deg = databaseError(grid, trueField);

    row.star_coverage_pct = kNaN;
    if (!stars.empty() && (k - initCount) % static_cast<std::size_t>(cfg.star_every) == 0)
      row.star_coverage_pct = starCoverage(state.theta, (*trace.truth)[k].orientation, stars);

    agg.add(row);
    if (cfg.record_steps)
      report.steps.push_back(std::move(row));
  }

  agg.finish(report);
  report.database_active = dbActive;
  if (dbActive)
  {
    AnchorVoxelGrid& grid = lane->grid;
    if (trueField && !grid.empty())
      report.final_db_error_deg = databaseError(grid, trueField);
    report.mean_visits_per_voxel = grid.meanVisits();
    report.memory_bytes = memoryFootprint(grid);
    report.database = std::move(grid);
  }

  const double simulated = samples.back().t - samples[initCount - 1].t;
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - wallStart).count();
  report.wall_clock_per_sim_second = simulated > 0.0 ? wall / simulated : 0.0;
  return report;
}

MetricsReport aggregateFromRows(std::span<const StepRow> rows, double evalStart)
{
  Aggregator agg;
  agg.evalStart = evalStart;
  for (const StepRow& r : rows)
    agg.add(r);
  MetricsReport report;
  agg.finish(report);
  return report;
}

void writeMetricsCsv(const MetricsReport& report, std::ostream& out)
{
  out << "step,t,orientation_error_deg,location_error_m,db_error_deg,db_voxels,iai,lambda,"
         "star_coverage_pct\n";
  for (const StepRow& r : report.steps)
  {
    out << fmt::format("{},{},{},{},{},{},{},{},{}\n", r.step, number(r.t),
                       number(r.orientation_error_deg), number(r.location_error_m),
                       number(r.db_error_deg), r.db_voxels, number(r.iai), number(r.lambda),
                       number(r.star_coverage_pct));
  }
  out << "# mean_orientation_error_deg=" << number(report.mean_orientation_error_deg) << '\n';
  out << "# mean_location_error_m=" << number(report.mean_location_error_m) << '\n';
  out << "# final_db_error_deg=" << number(report.final_db_error_deg) << '\n';
  out << "# db_voxels=" << report.db_voxels << '\n';
  out << "# mean_visits_per_voxel=" << number(report.mean_visits_per_voxel) << '\n';
  out << "# memory_bytes=" << report.memory_bytes << '\n';
  out << "# mean_lambda=" << number(report.mean_lambda) << '\n';
  out << "# mean_star_coverage_pct=" << number(report.mean_star_coverage_pct) << '\n';
  out << "# database_active=" << (report.database_active ? 1 : 0) << '\n';
  out << "# database_enabled_at=" << number(report.database_enabled_at) << '\n';
  out << "# aggregate_steps=" << report.aggregate_steps << '\n';
}

} // namespace magvox
