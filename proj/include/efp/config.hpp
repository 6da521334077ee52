#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>

namespace efp {

/// Flat key/value run configuration with dotted keys, e.g.
///   efp.outer_step=0.01
/// Lines starting with '#' are comments. CLI flags override file keys via
/// set(); the full resolved map goes into the run manifest.
class FlatConfig {
 public:
  FlatConfig() = default;

  static FlatConfig load(const std::string& path);

  void set(const std::string& key, const std::string& value);
  bool has(const std::string& key) const;

  std::string get_string(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key, double fallback) const;
  std::size_t get_size(const std::string& key, std::size_t fallback) const;
  std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;

  const std::map<std::string, std::string>& entries() const { return entries_; }

 private:
  std::optional<std::string> raw(const std::string& key) const;
  std::map<std::string, std::string> entries_;
};

}  // namespace efp
