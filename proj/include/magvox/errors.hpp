/*
 *  Copyright (C) 2026 The magvox Authors
 *
 *  SPDX-License-Identifier: Apache-2.0
 *  See the file LICENSE.txt for more information.
 */

#pragma once

#include <stdexcept>
#include <string>

namespace magvox
{

/// Base of every error raised by the library.
class Error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// Bad or inconsistent configuration. The CLI maps this to exit code 2.
class ConfigError : public Error
{
public:
  using Error::Error;
};

/// Bad input data (traces, sensor windows, geometry). The CLI maps this to exit code 3.
class DataError : public Error
{
public:
  using Error::Error;
};

class AntiparallelInput : public Error
{
public:
  AntiparallelInput() : Error("directions are antiparallel; rotation axis is undefined") {}
};

class ParseError : public DataError
{
public:
  ParseError(std::size_t line, const std::string& reason)
    : DataError("line " + std::to_string(line) + ": " + reason), m_line(line)
  {
  }

  std::size_t line() const { return m_line; }

private:
  std::size_t m_line;
};

class MonotonicityError : public DataError
{
public:
  MonotonicityError(double tPrev, double t)
    : DataError("timestamp " + std::to_string(t) + " does not follow " + std::to_string(tPrev)),
      m_tPrev(tPrev),
      m_t(t)
  {
  }

  double previous() const { return m_tPrev; }
  double current() const { return m_t; }

private:
  double m_tPrev;
  double m_t;
};

class IoError : public DataError
{
public:
  using DataError::DataError;
};

class NotStatic : public DataError
{
public:
  using DataError::DataError;
};

class DegenerateField : public DataError
{
public:
  using DataError::DataError;
};

class ZeroField : public DataError
{
public:
  ZeroField() : DataError("magnetometer vector has zero magnitude") {}
};

class EmptyDatabase : public DataError
{
public:
  EmptyDatabase() : DataError("anchor database has no filled voxels") {}
};

class EmptyInput : public DataError
{
public:
  EmptyInput() : DataError("empty input") {}
};

class NonPositiveMean : public DataError
{
public:
  NonPositiveMean() : DataError("mean magnitude is not positive") {}
};

class TooFewSamples : public DataError
{
public:
  TooFewSamples() : DataError("at least two samples are required") {}
};

class DegenerateMean : public DataError
{
public:
  DegenerateMean() : DataError("samples cancel out; mean direction is undefined") {}
};

class InfeasiblePose : public DataError
{
public:
  using DataError::DataError;
};

class IncompleteHistory : public DataError
{
public:
  IncompleteHistory() : DataError("particle history holds fewer than three locations") {}
};

class DegenerateInterval : public DataError
{
public:
  DegenerateInterval() : DataError("interpolation interval requires t1 < t2") {}
};

class MissingGroundTruth : public DataError
{
public:
  MissingGroundTruth() : DataError("trace has no ground truth") {}
};

} // namespace magvox
