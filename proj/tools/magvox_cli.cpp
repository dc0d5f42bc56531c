/*
 *  Copyright (C) 2026 The magvox Authors
 *
 *  SPDX-License-Identifier: Apache-2.0
 *  See the file LICENSE.txt for more information.
 */

// Command line front end: gen, run, sweep, detect-bench, compare.
//
// Every key of the flat config file can also be given as a flag, e.g.
// `--k_m 0.05` or `--field.variant=corridor`; flags override the file.

#include "magvox/experiments.hpp"
#include "magvox/harness.hpp"
#include "magvox/scenario.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <chrono>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

using namespace magvox;

namespace
{

constexpr int kExitConfig = 2;
constexpr int kExitData = 3;

struct CommonOptions
{
  std::string configPath;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string estimator;
  unsigned threads = 0;
};

void addCommon(CLI::App* sub, CommonOptions& opt)
{
  sub->add_option("--config", opt.configPath, "flat key = value config file");
  sub->add_option("--seed", opt.seed, "random seed (required)")->required();
  sub->add_option("-o,--out", opt.out, "output file (default: stdout)");
  sub->allow_extras();
}

/// Turn leftover `--key value` / `--key=value` arguments into config overrides.
KeyValueConfig overridesFrom(const std::vector<std::string>& extras)
{
  KeyValueConfig cfg;
  for (std::size_t i = 0; i < extras.size(); ++i)
  {
    const std::string& arg = extras[i];
    if (arg.rfind("--", 0) != 0 || arg.size() < 3)
      throw ConfigError(fmt::format("unexpected argument '{}'", arg));
    const std::string body = arg.substr(2);
    if (const std::size_t eq = body.find('='); eq != std::string::npos)
    {
      cfg.set(body.substr(0, eq), body.substr(eq + 1));
      continue;
    }
    if (i + 1 >= extras.size())
      throw ConfigError(fmt::format("flag '{}' needs a value", arg));
    cfg.set(body, extras[++i]);
  }
  return cfg;
}

KeyValueConfig loadConfig(const CommonOptions& opt, const CLI::App* sub)
{
  KeyValueConfig cfg =
      opt.configPath.empty() ? KeyValueConfig{} : KeyValueConfig::fromFile(opt.configPath);
  cfg.merge(overridesFrom(sub->remaining()));
  cfg.set("seed", std::to_string(*opt.seed));
  if (!opt.estimator.empty())
    cfg.set("estimator", opt.estimator);
  return cfg;
}

void rejectUnused(const KeyValueConfig& cfg)
{
  const std::vector<std::string> unused = cfg.unusedKeys();
  if (!unused.empty())
    throw ConfigError(fmt::format("unknown config key(s): {}", fmt::join(unused, ", ")));
}

/// Write to the named file, or stdout when the name is empty or "-".
template <typename Fn>
void emit(const std::string& path, Fn&& write)
{
  if (path.empty() || path == "-")
  {
    write(std::cout);
    return;
  }
  std::ofstream out(path);
  if (!out)
    throw IoError("cannot open " + path + " for writing");
  write(out);
  if (!out)
    throw IoError("write failed for " + path);
}

bool mentionsScenario(const KeyValueConfig& cfg)
{
  for (const auto& [k, v] : cfg.entries())
    if (k.rfind("field.", 0) == 0 || k.rfind("motion.", 0) == 0 || k.rfind("noise.", 0) == 0)
      return true;
  return false;
}

/// Scenarios seeded from the base seed, one per run.
std::vector<Scenario> scenarioSuite(const KeyValueConfig& cfg, int runs, bool standardNoiseModel)
{
  const Scenario base = scenarioFromConfig(cfg);
  std::vector<Scenario> out;
  for (int r = 0; r < runs; ++r)
  {
    KeyValueConfig c = cfg;
    c.set("seed", std::to_string(deriveSeed(base.seed, 100 + static_cast<std::uint64_t>(r))));
    Scenario s = scenarioFromConfig(c);
    if (standardNoiseModel)
      s.noise = standardNoise(s.seed);
    out.push_back(s);
  }
  return out;
}

/// Suites default to a 30 degree corridor walked with exercise motion.
void applySuiteDefaults(KeyValueConfig& cfg)
{
  if (!cfg.has("field.variant"))
    cfg.set("field.variant", "corridor");
  if (!cfg.has("field.amplitude_deg"))
    cfg.set("field.amplitude_deg", "30");
  if (!cfg.has("motion.variant"))
    cfg.set("motion.variant", "exercise");
}

int cmdGen(const CommonOptions& opt, const CLI::App* sub)
{
  const KeyValueConfig cfg = loadConfig(opt, sub);
  const Scenario scenario = scenarioFromConfig(cfg);
  rejectUnused(cfg);
  const ImuTrace trace = generate(scenario);
  emit(opt.out, [&](std::ostream& os) { writeTrace(trace, os); });
  return 0;
}

int cmdRun(const CommonOptions& opt, const CLI::App* sub, const std::string& tracePath,
           const std::string& gridDump)
{
  const KeyValueConfig cfg = loadConfig(opt, sub);
  const RunConfig run = runConfigFromConfig(cfg);

  std::optional<Scenario> scenario;
  if (tracePath.empty() || mentionsScenario(cfg))
    scenario = scenarioFromConfig(cfg);
  rejectUnused(cfg);

  const ImuTrace trace = tracePath.empty() ? generate(*scenario) : readTrace(tracePath);
  std::optional<MagneticField> field;
  if (scenario)
    field.emplace(scenario->field);
  FieldDirectionFn trueField;
  if (field)
    trueField = [&field](const Vec3& x) { return field->directionAt(x); };

  const MetricsReport report = runPipeline(trace, run, trueField);
  emit(opt.out, [&](std::ostream& os) { writeMetricsCsv(report, os); });

  if (!gridDump.empty())
    emit(gridDump, [&](std::ostream& os) { dumpGrid(report.database, os); });
  std::cerr << fmt::format("{}: mean orientation error {:.4f} deg, {:.3f} s wall per simulated s\n",
                           toString(run.estimator), report.mean_orientation_error_deg,
                           report.wall_clock_per_sim_second);
  return 0;
}

int cmdSweep(const CommonOptions& opt, const CLI::App* sub, const std::string& param,
             std::vector<double> values, int runs)
{
  KeyValueConfig cfg = loadConfig(opt, sub);
  applySuiteDefaults(cfg);
  if (values.empty())
    values = {0.025, 0.05, 0.1, 0.2, 0.4};
  if (runs < 1)
    throw ConfigError("--runs must be at least 1");

  const std::vector<Scenario> scenarios = scenarioSuite(cfg, runs, !cfg.has("noise.gyro_std"));
  const std::vector<ImuTrace> traces = [&] {
    std::vector<ImuTrace> t(scenarios.size());
    parallelFor(t.size(), [&](std::size_t i) { t[i] = generate(scenarios[i]); }, opt.threads);
    return t;
  }();

  std::vector<RunConfig> configs;
  for (double v : values)
  {
    KeyValueConfig c = cfg;
    c.set(param, fmt::format("{}", v));
    configs.push_back(runConfigFromConfig(c));
    rejectUnused(c);
  }

  std::vector<MetricsReport> reports(configs.size() * scenarios.size());
  parallelFor(
      reports.size(),
      [&](std::size_t cell) {
        const std::size_t s = cell % scenarios.size();
        RunConfig rc = runConfigFor(scenarios[s], configs[cell / scenarios.size()]);
        rc.record_steps = false;
        reports[cell] = runScenario(scenarios[s], traces[s], rc);
      },
      opt.threads);

  emit(opt.out, [&](std::ostream& os) {
    os << fmt::format("{},mean_orientation_error_deg,mean_db_error_deg,mean_voxels,runs\n", param);
    for (std::size_t v = 0; v < values.size(); ++v)
    {
      double err = 0.0;
      double dbErr = 0.0;
      int dbRuns = 0;
      double voxels = 0.0;
      for (std::size_t s = 0; s < scenarios.size(); ++s)
      {
        const MetricsReport& m = reports[v * scenarios.size() + s];
        err += m.mean_orientation_error_deg;
        if (!std::isnan(m.final_db_error_deg))
        {
          dbErr += m.final_db_error_deg;
          ++dbRuns;
        }
        voxels += static_cast<double>(m.db_voxels);
      }
      const auto n = static_cast<double>(scenarios.size());
      const double meanDb = dbRuns > 0 ? dbErr / dbRuns : std::numeric_limits<double>::quiet_NaN();
      os << fmt::format("{:g},{:.6f},{:.6f},{:.2f},{}\n", values[v], err / n, meanDb, voxels / n,
                        scenarios.size());
    }
  });
  return 0;
}

int cmdDetectBench(const CommonOptions& opt, const CLI::App* sub, int n, const std::string& casesPath)
{
  const KeyValueConfig cfg = loadConfig(opt, sub);
  const RunConfig run = runConfigFromConfig(cfg);
  rejectUnused(cfg);

  const DetectionReport report =
      detectionBenchmark(n, *opt.seed, run.detector, run.detect_window_s, opt.threads);
  emit(opt.out, [&](std::ostream& os) { writeDetectionCsv(report, os); });
  if (!casesPath.empty())
  {
    emit(casesPath, [&](std::ostream& os) {
      os << "seed,variant,amplitude_deg,base_magnitude,true_distortion_deg,label,a,b\n";
      for (const DetectionCase& c : report.cases)
        os << fmt::format("{},{},{:.4f},{:.4f},{:.4f},{},{},{}\n", c.seed, toString(c.variant),
                          c.amplitude_deg, c.base_magnitude, c.true_distortion_deg, int(c.label),
                          int(c.a), int(c.b));
    });
  }
  return 0;
}

int cmdCompare(const CommonOptions& opt, const CLI::App* sub, const std::vector<std::string>& names,
               int runs)
{
  KeyValueConfig cfg = loadConfig(opt, sub);
  applySuiteDefaults(cfg);
  if (runs < 1)
    throw ConfigError("--runs must be at least 1");
  const RunConfig base = runConfigFromConfig(cfg);
  const std::vector<Scenario> scenarios = scenarioSuite(cfg, runs, !cfg.has("noise.gyro_std"));
  rejectUnused(cfg);

  std::vector<Estimator> estimators;
  for (const std::string& name : names)
    estimators.push_back(parseEstimator(name));
  if (estimators.empty())
    estimators = {Estimator::Mdr, Estimator::Muse, Estimator::Avoid, Estimator::GyroAcc};

  const std::vector<CompareRow> rows = compareEstimators(scenarios, estimators, base, opt.threads);
  emit(opt.out, [&](std::ostream& os) { writeCompareCsv(rows, os); });

  std::map<std::string_view, std::pair<double, int>> summary;
  for (const CompareRow& r : rows)
  {
    auto& [sum, count] = summary[toString(r.estimator)];
    sum += r.report.mean_orientation_error_deg;
    ++count;
  }
  for (const auto& [name, s] : summary)
    std::cerr << fmt::format("{:>8}: mean orientation error {:.4f} deg over {} runs\n", name,
                             s.first / s.second, s.second);
  return 0;
}

} // namespace

int main(int argc, char** argv)
{
  CLI::App app{"magvox: magnetic-distortion-resistant orientation estimation toolkit"};
  app.require_subcommand(1);

  CommonOptions opt;

  CLI::App* gen = app.add_subcommand("gen", "synthesize a scenario and write a trace CSV");
  addCommon(gen, opt);

  std::string tracePath;
  std::string gridDump;
  CLI::App* run = app.add_subcommand("run", "run one estimator and write the metrics CSV");
  addCommon(run, opt);
  run->add_option("--trace", tracePath, "trace CSV (default: synthesize from scenario keys)");
  run->add_option("--estimator", opt.estimator, "mdr | muse | avoid | gyro-acc")
      ->check(CLI::IsMember({"mdr", "muse", "avoid", "gyro-acc"}));
  run->add_option("--grid-dump", gridDump, "write the final anchor database as CSV");

  std::string param = "l_db";
  std::vector<double> values;
  int runs = 5;
  CLI::App* sweep = app.add_subcommand("sweep", "sweep one run parameter over a scenario suite");
  addCommon(sweep, opt);
  sweep->add_option("--param", param, "config key to sweep")->capture_default_str();
  sweep->add_option("--values", values, "comma-separated values")->delimiter(',');
  sweep->add_option("--runs", runs, "scenarios per value")->capture_default_str();
  sweep->add_option("--threads", opt.threads, "worker threads (0 = all cores)");

  int nScenarios = 200;
  std::string casesPath;
  CLI::App* detect = app.add_subcommand("detect-bench", "distortion-free detection benchmark");
  addCommon(detect, opt);
  detect->add_option("--n", nScenarios, "number of labeled scenarios")->capture_default_str();
  detect->add_option("--cases", casesPath, "optional per-scenario CSV");
  detect->add_option("--threads", opt.threads, "worker threads (0 = all cores)");

  std::vector<std::string> estimatorNames;
  int compareRuns = 5;
  CLI::App* compare = app.add_subcommand("compare", "compare estimators over a scenario suite");
  addCommon(compare, opt);
  compare->add_option("--estimators", estimatorNames, "subset of mdr,muse,avoid,gyro-acc")
      ->delimiter(',');
  compare->add_option("--runs", compareRuns, "scenarios (seeds)")->capture_default_str();
  compare->add_option("--threads", opt.threads, "worker threads (0 = all cores)");

  try
  {
    app.parse(argc, argv);
  }
  catch (const CLI::ParseError& e)
  {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  const auto start = std::chrono::steady_clock::now();
  try
  {
    int rc = 0;
    if (*gen)
      rc = cmdGen(opt, gen);
    else if (*run)
      rc = cmdRun(opt, run, tracePath, gridDump);
    else if (*sweep)
      rc = cmdSweep(opt, sweep, param, values, runs);
    else if (*detect)
      rc = cmdDetectBench(opt, detect, nScenarios, casesPath);
    else if (*compare)
      rc = cmdCompare(opt, compare, estimatorNames, compareRuns);
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::cerr << fmt::format("wall clock {:.2f} s\n", wall);
    return rc;
  }
  catch (const ConfigError& e)
  {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  }
  catch (const DataError& e)
  {
    std::cerr << "data error: " << e.what() << '\n';
    return kExitData;
  }
  catch (const Error& e)
  {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  }
}
