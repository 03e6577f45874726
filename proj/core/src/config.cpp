#include "xlner/config.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <sstream>

namespace xlner {

ConfigMap ConfigMap::from_stream(std::istream& in) {
  ConfigMap config;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    std::string text = trim(line);
    if (text.empty() || text.front() == '#') continue;
    std::size_t eq = text.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(line_number) + ": expected key=value");
    }
    std::string key = trim(text.substr(0, eq));
    std::string value = trim(text.substr(eq + 1));
    if (key.empty()) {
      throw ConfigError("config line " + std::to_string(line_number) + ": empty key");
    }
    config.values_[key] = value;
  }
  return config;
}

ConfigMap ConfigMap::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file: " + path);
  return from_stream(in);
}

void ConfigMap::set(const std::string& key, const std::string& value) {
  values_[key] = value;
}

bool ConfigMap::has(const std::string& key) const { return values_.count(key) > 0; }

std::string ConfigMap::get_string(const std::string& key, const std::string& fallback) const {
  auto it = values_.find(key);
  return it == values_.end() || it->second.empty() ? fallback : it->second;
}

std::string ConfigMap::require_string(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end() || it->second.empty()) {
    throw ConfigError("missing required config key: " + key);
  }
  return it->second;
}

long long ConfigMap::get_int(const std::string& key, long long fallback) const {
  auto it = values_.find(key);
  if (it == values_.end() || it->second.empty()) return fallback;
  return parse_int(it->second, "config key " + key);
}

double ConfigMap::get_double(const std::string& key, double fallback) const {
  auto it = values_.find(key);
  if (it == values_.end() || it->second.empty()) return fallback;
  return parse_double(it->second, "config key " + key);
}

bool ConfigMap::get_bool(const std::string& key, bool fallback) const {
  auto it = values_.find(key);
  if (it == values_.end() || it->second.empty()) return fallback;
  const std::string& value = it->second;
  if (value == "true" || value == "1" || value == "yes" || value == "on") return true;
  if (value == "false" || value == "0" || value == "no" || value == "off") return false;
  throw ConfigError("config key " + key + ": expected a boolean, got '" + value + "'");
}

std::vector<std::string> ConfigMap::get_list(const std::string& key,
                                             const std::vector<std::string>& fallback) const {
  auto it = values_.find(key);
  if (it == values_.end() || it->second.empty()) return fallback;
  std::vector<std::string> items;
  for (const auto& part : split_char(it->second, ',')) {
    std::string entry = trim(part);
    if (!entry.empty()) items.push_back(std::move(entry));
  }
  if (items.empty()) return fallback;
  return items;
}

std::vector<std::uint64_t> ConfigMap::get_seeds(
    const std::string& key, const std::vector<std::uint64_t>& fallback) const {
  auto it = values_.find(key);
  if (it == values_.end() || it->second.empty()) return fallback;
  std::vector<std::uint64_t> seeds;
  for (const auto& part : split_char(it->second, ',')) {
    std::string entry = trim(part);
    if (entry.empty()) continue;
    long long value = parse_int(entry, "config key " + key);
    if (value < 0) throw ConfigError("config key " + key + ": seeds must be nonnegative");
    seeds.push_back(static_cast<std::uint64_t>(value));
  }
  if (seeds.empty()) throw ConfigError("config key " + key + ": empty seed list");
  return seeds;
}

void ConfigMap::check_known(std::span<const std::string> known) const {
  for (const auto& [key, value] : values_) {
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      throw ConfigError("unknown config key: " + key);
    }
  }
}

}  // namespace xlner
