#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace solmod {

// Flat "key = value" configuration text: one pair per line, '#' starts a
// comment, blank lines are ignored.  Every key has a default; unknown keys
// are rejected so typos do not silently fall back.
class KeyValueConfig {
 public:
  KeyValueConfig() = default;
  static KeyValueConfig parse(const std::string& text);
  static KeyValueConfig load(const std::string& path);

  double get_double(const std::string& key, double fallback);
  std::uint64_t get_u64(const std::string& key, std::uint64_t fallback);
  std::size_t get_size(const std::string& key, std::size_t fallback);
  int get_int(const std::string& key, int fallback);
  std::string get_string(const std::string& key, const std::string& fallback);
  std::vector<double> get_double_list(const std::string& key, std::vector<double> fallback);

  bool has(const std::string& key) const { return entries_.count(key) != 0; }
  /// Throws std::invalid_argument if any key was never consumed.
  void reject_unknown_keys() const;

 private:
  std::map<std::string, std::string> entries_;
  std::set<std::string> consumed_;
};

}  // namespace solmod
