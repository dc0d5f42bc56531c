/*
 *  Copyright (C) 2026 The magvox Authors
 *
 *  SPDX-License-Identifier: Apache-2.0
 *  See the file LICENSE.txt for more information.
 */

#pragma once

#include "magvox/errors.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace magvox
{

/**
 * Flat `key = value` configuration. Blank lines and text after `#` are
 * ignored. Later assignments override earlier ones, which is how command-line
 * flags are layered over a file.
 */
class KeyValueConfig
{
public:
  static KeyValueConfig fromFile(const std::filesystem::path& path);
  static KeyValueConfig fromString(std::string_view text);

  void set(std::string key, std::string value);
  void merge(const KeyValueConfig& other);

  bool has(std::string_view key) const;

  std::string getString(std::string_view key, std::string_view fallback) const;
  double getDouble(std::string_view key, double fallback) const;
  long getInt(std::string_view key, long fallback) const;
  std::uint64_t getUint(std::string_view key, std::uint64_t fallback) const;
  bool getBool(std::string_view key, bool fallback) const;
  std::vector<double> getDoubleList(std::string_view key, const std::vector<double>& fallback) const;

  /// Keys that were never read by any getter.
  std::vector<std::string> unusedKeys() const;

  const std::map<std::string, std::string, std::less<>>& entries() const { return m_values; }

private:
  const std::string* find(std::string_view key) const;

  std::map<std::string, std::string, std::less<>> m_values;
  mutable std::set<std::string, std::less<>> m_used;
};

} // namespace magvox
