/*
 *  Copyright (C) 2026 The magvox Authors
 *
 *  SPDX-License-Identifier: Apache-2.0
 *  See the file LICENSE.txt for more information.
 */

#include "magvox/imu_types.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string_view>

#include <fmt/format.h>

namespace magvox
{
namespace
{
constexpr std::string_view kHeaderImu = "t,gx,gy,gz,ax,ay,az,mx,my,mz";
constexpr std::string_view kHeaderTruth = ",qw,qx,qy,qz,px,py,pz";
constexpr double kRateJitter = 1e-6;

bool finite(const Vec3& v)
{
  return v.allFinite();
}

std::vector<double> splitRow(std::string_view line, std::size_t lineNo)
{
  std::vector<double> values;
  std::size_t start = 0;
  while (start <= line.size())
  {
    const std::size_t comma = line.find(',', start);
    const std::string_view field =
        line.substr(start, comma == std::string_view::npos ? line.size() - start : comma - start);

    double value = 0.0;
    const auto* first = field.data();
    const auto* last = field.data() + field.size();
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last || field.empty())
      throw ParseError(lineNo, fmt::format("malformed number '{}'", field));
    if (!std::isfinite(value))
      throw ParseError(lineNo, "non-finite value");
    values.push_back(value);

    if (comma == std::string_view::npos)
      break;
    start = comma + 1;
  }
  return values;
}
} // namespace

double ImuTrace::sampleInterval() const
{
  if (samples.size() < 2)
    return kSampleInterval;
  return (samples.back().t - samples.front().t) / static_cast<double>(samples.size() - 1);
}

void validateTrace(const ImuTrace& trace)
{
  const auto& s = trace.samples;
  for (std::size_t i = 0; i < s.size(); ++i)
  {
    if (!std::isfinite(s[i].t) || !finite(s[i].gyro) || !finite(s[i].accel) || !finite(s[i].mag))
      throw DataError(fmt::format("sample {} has non-finite components", i));
    if (i > 0 && !(s[i].t > s[i - 1].t))
      throw MonotonicityError(s[i - 1].t, s[i].t);
  }

  if (s.size() > 2)
  {
    const double dt = trace.sampleInterval();
    for (std::size_t i = 1; i < s.size(); ++i)
    {
      const double expected = s.front().t + dt * static_cast<double>(i);
      if (std::abs(s[i].t - expected) > kRateJitter)
        throw DataError(fmt::format("sample {} breaks the constant sampling rate", i));
    }
  }

  if (trace.truth)
  {
    const auto& truth = *trace.truth;
    if (truth.size() != s.size())
      throw DataError("ground truth length differs from sample count");
    for (std::size_t i = 0; i < truth.size(); ++i)
    {
      if (std::abs(truth[i].t - s[i].t) > kRateJitter)
        throw DataError(fmt::format("ground truth {} is not aligned with its sample", i));
      if (!finite(truth[i].location))
        throw DataError(fmt::format("ground truth {} has a non-finite location", i));
    }
  }
}

void writeTrace(const ImuTrace& trace, std::ostream& out)
{
  const bool withTruth = trace.hasTruth();
  if (withTruth && trace.truth->size() != trace.samples.size())
    throw DataError("ground truth length differs from sample count");

  out << kHeaderImu;
  if (withTruth)
    out << kHeaderTruth;
  out << '\n';

  fmt::memory_buffer row;
  for (std::size_t i = 0; i < trace.samples.size(); ++i)
  {
    const ImuSample& s = trace.samples[i];
    row.clear();
    fmt::format_to(std::back_inserter(row),
                   "{:.9f},{:.9f},{:.9f},{:.9f},{:.9f},{:.9f},{:.9f},{:.9f},{:.9f},{:.9f}", s.t,
                   s.gyro.x(), s.gyro.y(), s.gyro.z(), s.accel.x(), s.accel.y(), s.accel.z(),
                   s.mag.x(), s.mag.y(), s.mag.z());
    if (withTruth)
    {
      const GroundTruth& g = (*trace.truth)[i];
      const auto& q = g.orientation.quaternion();
      fmt::format_to(std::back_inserter(row), ",{:.9f},{:.9f},{:.9f},{:.9f},{:.9f},{:.9f},{:.9f}",
                     q.w(), q.x(), q.y(), q.z(), g.location.x(), g.location.y(),
                     g.location.z());
    }
    row.push_back('\n');
    out.write(row.data(), static_cast<std::streamsize>(row.size()));
  }
  if (!out)
    throw IoError("failed writing trace");
}

void writeTrace(const ImuTrace& trace, const std::filesystem::path& path)
{
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw IoError("cannot open " + path.string() + " for writing");
  writeTrace(trace, out);
}

ImuTrace readTrace(std::istream& in)
{
  ImuTrace trace;
  std::string line;
  std::size_t lineNo = 1;

  if (!std::getline(in, line))
    throw ParseError(lineNo, "missing header");

  bool withTruth = false;
  if (line == kHeaderImu)
    withTruth = false;
  else if (line == std::string(kHeaderImu) + std::string(kHeaderTruth))
    withTruth = true;
  else
    throw ParseError(lineNo, "unexpected header");

  const std::size_t columns = withTruth ? 17 : 10;
  std::vector<GroundTruth> truth;

  while (std::getline(in, line))
  {
    ++lineNo;
    if (line.empty())
      continue;
    const std::vector<double> v = splitRow(line, lineNo);
    if (v.size() != columns)
      throw ParseError(lineNo, fmt::format("expected {} columns, found {}", columns, v.size()));

    ImuSample s;
    s.t = v[0];
    s.gyro = Vec3(v[1], v[2], v[3]);
    s.accel = Vec3(v[4], v[5], v[6]);
    s.mag = Vec3(v[7], v[8], v[9]);
    if (!trace.samples.empty() && !(s.t > trace.samples.back().t))
      throw MonotonicityError(trace.samples.back().t, s.t);
    trace.samples.push_back(s);

    if (withTruth)
    {
      const Eigen::Quaterniond q(v[10], v[11], v[12], v[13]);
      if (q.norm() < 0.5)
        throw ParseError(lineNo, "orientation quaternion is not unit");
      truth.push_back(GroundTruth{s.t, Rotationd(q), Vec3(v[14], v[15], v[16])});
    }
  }

  if (withTruth)
    trace.truth = std::move(truth);
  validateTrace(trace);
  return trace;
}

ImuTrace readTrace(const std::filesystem::path& path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw IoError("cannot open " + path.string());
  ImuTrace trace = readTrace(in);
  trace.meta.scenario = path.stem().string();
  return trace;
}

} // namespace magvox
