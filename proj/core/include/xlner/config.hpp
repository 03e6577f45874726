#ifndef XLNER_CONFIG_HPP
#define XLNER_CONFIG_HPP

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "xlner/common.hpp"

namespace xlner {

// Flat key=value configuration with dotted section prefixes
// ("train.epochs=3"). '#' starts a comment line; later assignments win.
class ConfigMap {
 public:
  static ConfigMap from_stream(std::istream& in);
  static ConfigMap from_file(const std::string& path);

  void set(const std::string& key, const std::string& value);
  bool has(const std::string& key) const;

  std::string get_string(const std::string& key, const std::string& fallback) const;
  std::string require_string(const std::string& key) const;
  long long get_int(const std::string& key, long long fallback) const;
  double get_double(const std::string& key, double fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  // Comma-separated values; empty string yields the fallback.
  std::vector<std::string> get_list(const std::string& key,
                                    const std::vector<std::string>& fallback) const;
  std::vector<std::uint64_t> get_seeds(const std::string& key,
                                       const std::vector<std::uint64_t>& fallback) const;

  // Rejects keys outside the known set (typo protection).
  void check_known(std::span<const std::string> known) const;

  const std::map<std::string, std::string>& entries() const { return values_; }

 private:
  std::map<std::string, std::string> values_;
};

}  // namespace xlner

#endif  // XLNER_CONFIG_HPP
