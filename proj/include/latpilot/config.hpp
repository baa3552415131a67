#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace latpilot {

/// Bad or missing configuration; maps to CLI exit code 1.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Sectioned key-value configuration:
///   [section]
///   key = value        # comment
/// List values are whitespace-separated. Errors carry file:line context.
class KeyValueConfig {
 public:
  static KeyValueConfig parse_file(const std::string& path);
  static KeyValueConfig parse_string(const std::string& text,
                                     const std::string& name = "<string>");

  bool has_section(const std::string& section) const;
  bool has(const std::string& section, const std::string& key) const;

  std::string get_string(const std::string& section, const std::string& key) const;
  std::string get_string(const std::string& section, const std::string& key,
                         const std::string& fallback) const;
  long long get_int(const std::string& section, const std::string& key) const;
  long long get_int(const std::string& section, const std::string& key,
                    long long fallback) const;
  double get_real(const std::string& section, const std::string& key) const;
  double get_real(const std::string& section, const std::string& key,
                  double fallback) const;
  bool get_bool(const std::string& section, const std::string& key,
                bool fallback) const;
  std::uint64_t get_u64(const std::string& section, const std::string& key,
                        std::uint64_t fallback) const;
  std::vector<double> get_real_list(const std::string& section,
                                    const std::string& key) const;
  std::vector<long long> get_int_list(const std::string& section,
                                      const std::string& key) const;

 private:
  struct Entry {
    std::string raw;
    int line = 0;
  };
  std::string name_;
  std::map<std::string, std::map<std::string, Entry>> sections_;

  const Entry& require(const std::string& section, const std::string& key) const;
  [[noreturn]] void fail(const Entry& e, const std::string& section,
                         const std::string& key, const std::string& what) const;
};

} // namespace latpilot
