#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace molrl {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A flat `key = value` document.
///
/// Lines are `key = value`; `#` starts a comment when it is the first
/// non-blank character of a line. Keys are unique. Values are trimmed, and
/// the escapes `\n`, `\t` and `\\` are expanded so long prompt texts fit on
/// one line.
class KeyValueFile {
 public:
  struct Entry {
    std::string key;
    std::string value;
    std::size_t line = 0;
  };

  static KeyValueFile parse(std::string_view text, std::string source_name = "<memory>");
  static KeyValueFile load(const std::filesystem::path& path);

  bool contains(std::string_view key) const;
  const std::string& get(std::string_view key) const;
  std::string get_or(std::string_view key, std::string fallback) const;

  double get_double(std::string_view key) const;
  double get_double_or(std::string_view key, double fallback) const;
  long long get_int(std::string_view key) const;
  long long get_int_or(std::string_view key, long long fallback) const;
  // Comma-separated list, entries trimmed, empty entries dropped.
  std::vector<std::string> get_list(std::string_view key) const;

  // Throws ConfigError naming the first key not in `allowed`.
  void require_known_keys(const std::vector<std::string_view>& allowed) const;

  const std::vector<Entry>& entries() const { return entries_; }
  const std::string& source() const { return source_; }

 private:
  std::vector<Entry> entries_;
  std::map<std::string, std::size_t, std::less<>> index_;
  std::string source_;

  const Entry& entry(std::string_view key) const;
};

}  // namespace molrl
