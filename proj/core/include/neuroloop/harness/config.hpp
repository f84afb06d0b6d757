#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace neuroloop {

/// Flat key=value configuration. Values stay as strings until read; typed
/// getters parse on demand and throw ConfigError on malformed or missing
/// entries. Iteration order is the sorted key order, which makes the dump
/// and the hash canonical.
class Config {
 public:
  Config() = default;

  /// Parses `key = value` lines ('#' comments, blank lines allowed) on top of
  /// this config. Keys not already present are rejected, so typos in run
  /// configs fail loudly; start from default_config() for the full key set.
  void merge_file(const std::string& path);
  void merge_line(const std::string& line, int line_no = 0);

  void set(const std::string& key, const std::string& value);
  void set(const std::string& key, double value);
  void set(const std::string& key, std::int64_t value);
  bool has(const std::string& key) const { return values_.count(key) != 0; }

  const std::string& get_string(const std::string& key) const;
  double get_double(const std::string& key) const;
  std::int64_t get_int(const std::string& key) const;
  bool get_bool(const std::string& key) const;
  std::vector<double> get_list(const std::string& key) const;  // comma separated

  /// FNV-1a over the canonical dump; identifies the effective configuration.
  std::uint64_t hash() const;
  void write(std::ostream& out) const;

  const std::map<std::string, std::string>& entries() const { return values_; }

 private:
  std::map<std::string, std::string> values_;
  bool sealed_ = false;  // set once defaults exist: unknown keys then rejected
  friend Config default_config();
};

/// Every tunable with its shipped default.
Config default_config();

}  // namespace neuroloop
