/*
 *  Copyright (C) 2026 The magvox Authors
 *
 *  SPDX-License-Identifier: Apache-2.0
 *  See the file LICENSE.txt for more information.
 */

#include "magvox/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

namespace magvox
{
namespace
{
std::string_view trim(std::string_view s)
{
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
    s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
    s.remove_suffix(1);
  return s;
}

template <typename T>
T parseNumber(std::string_view key, std::string_view text)
{
  T value{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size())
    throw ConfigError(fmt::format("key '{}': cannot parse '{}'", key, text));
  return value;
}
} // namespace

KeyValueConfig KeyValueConfig::fromFile(const std::filesystem::path& path)
{
  std::ifstream in(path);
  if (!in)
    throw ConfigError("cannot open config file " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return fromString(buffer.str());
}

KeyValueConfig KeyValueConfig::fromString(std::string_view text)
{
  KeyValueConfig cfg;
  std::size_t lineNo = 0;
  while (!text.empty())
  {
    ++lineNo;
    const std::size_t nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);

    if (const std::size_t hash = line.find('#'); hash != std::string_view::npos)
      line = line.substr(0, hash);
    line = trim(line);
    if (line.empty())
      continue;

    const std::size_t eq = line.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError(fmt::format("config line {}: expected key = value", lineNo));
    const std::string_view key = trim(line.substr(0, eq));
    if (key.empty())
      throw ConfigError(fmt::format("config line {}: empty key", lineNo));
    cfg.set(std::string(key), std::string(trim(line.substr(eq + 1))));
  }
  return cfg;
}

void KeyValueConfig::set(std::string key, std::string value)
{
  m_values.insert_or_assign(std::move(key), std::move(value));
}

void KeyValueConfig::merge(const KeyValueConfig& other)
{
  for (const auto& [k, v] : other.m_values)
    m_values.insert_or_assign(k, v);
}

bool KeyValueConfig::has(std::string_view key) const
{
  return m_values.find(key) != m_values.end();
}

const std::string* KeyValueConfig::find(std::string_view key) const
{
  const auto it = m_values.find(key);
  if (it == m_values.end())
    return nullptr;
  m_used.insert(std::string(key));
  return &it->second;
}

std::string KeyValueConfig::getString(std::string_view key, std::string_view fallback) const
{
  const std::string* v = find(key);
  return v ? *v : std::string(fallback);
}

double KeyValueConfig::getDouble(std::string_view key, double fallback) const
{
  const std::string* v = find(key);
  return v ? parseNumber<double>(key, *v) : fallback;
}

long KeyValueConfig::getInt(std::string_view key, long fallback) const
{
  const std::string* v = find(key);
  return v ? parseNumber<long>(key, *v) : fallback;
}

std::uint64_t KeyValueConfig::getUint(std::string_view key, std::uint64_t fallback) const
{
  const std::string* v = find(key);
  return v ? parseNumber<std::uint64_t>(key, *v) : fallback;
}

bool KeyValueConfig::getBool(std::string_view key, bool fallback) const
{
  const std::string* v = find(key);
  if (!v)
    return fallback;
  std::string s = *v;
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  if (s == "1" || s == "true" || s == "yes" || s == "on")
    return true;
  if (s == "0" || s == "false" || s == "no" || s == "off")
    return false;
  throw ConfigError(fmt::format("key '{}': expected a boolean, got '{}'", key, *v));
}

std::vector<double> KeyValueConfig::getDoubleList(std::string_view key,
                                                  const std::vector<double>& fallback) const
{
  const std::string* v = find(key);
  if (!v)
    return fallback;
  std::vector<double> out;
  std::string_view rest = *v;
  while (!rest.empty())
  {
    const std::size_t comma = rest.find(',');
    const std::string_view item = trim(rest.substr(0, comma));
    if (!item.empty())
      out.push_back(parseNumber<double>(key, item));
    if (comma == std::string_view::npos)
      break;
    rest = rest.substr(comma + 1);
  }
  return out;
}

std::vector<std::string> KeyValueConfig::unusedKeys() const
{
  std::vector<std::string> out;
  for (const auto& [k, v] : m_values)
    if (m_used.find(k) == m_used.end())
      out.push_back(k);
  return out;
}

} // namespace magvox
