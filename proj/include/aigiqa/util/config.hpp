#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace aigiqa::util {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Flat `key = value` configuration with `#` comments.
///
/// Values read from a file can be overridden from the environment: a variable
/// named `<PREFIX><KEY>` (key upper-cased, `-` and `.` mapped to `_`) replaces
/// or adds the entry. Keys are case-sensitive and stored lower-case.
class KeyValueConfig {
 public:
  KeyValueConfig() = default;

  static KeyValueConfig parse(std::string_view text);
  static KeyValueConfig load(const std::filesystem::path& path);

  // Applies overrides from the process environment.
  void apply_env_overrides(std::string_view prefix);

  bool contains(std::string_view key) const;
  std::optional<std::string> get(std::string_view key) const;
  std::string get_string(std::string_view key, std::string_view fallback) const;
  std::int64_t get_int(std::string_view key, std::int64_t fallback) const;
  double get_double(std::string_view key, double fallback) const;
  bool get_bool(std::string_view key, bool fallback) const;

  void set(std::string key, std::string value);

  // Canonical text form: sorted keys, one `key = value` per line.
  std::string serialize() const;

  const std::map<std::string, std::string, std::less<>>& entries() const {
    return entries_;
  }

 private:
  std::map<std::string, std::string, std::less<>> entries_;
};

}  // namespace aigiqa::util
