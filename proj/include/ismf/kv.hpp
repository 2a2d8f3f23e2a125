// Copyright 2026 ISMF Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef ISMF_KV_HPP_
#define ISMF_KV_HPP_

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace ismf {

/// Thrown on bad configuration input; the CLI maps it to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Flat ordered key/value text: one `key = value` per line, `#` comments,
/// blank lines ignored. Values keep embedded spaces.
class KvMap {
 public:
  static KvMap parse_text(const std::string& text, const std::string& origin = "<text>");
  static KvMap parse_file(const std::string& path);

  bool has(const std::string& key) const;
  const std::string& get(const std::string& key) const;            // throws ConfigError
  std::string get_or(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key) const;
  double get_double_or(const std::string& key, double fallback) const;
  long long get_int(const std::string& key) const;
  long long get_int_or(const std::string& key, long long fallback) const;
  std::uint64_t get_u64(const std::string& key) const;
  std::vector<double> get_doubles(const std::string& key) const;   // space-separated

  void set(const std::string& key, const std::string& value);
  void set_double(const std::string& key, double value);  // %.17g
  void set_int(const std::string& key, long long value);
  void set_u64(const std::string& key, std::uint64_t value);

  std::string serialize() const;
  const std::vector<std::pair<std::string, std::string>>& items() const {
    return items_;
  }

 private:
  std::optional<std::size_t> find(const std::string& key) const;
  std::vector<std::pair<std::string, std::string>> items_;
  std::string origin_ = "<empty>";
};

}  // namespace ismf

#endif  // ISMF_KV_HPP_
