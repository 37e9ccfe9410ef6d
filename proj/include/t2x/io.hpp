#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace t2x {

/// Ordered key-value record written as a `.meta` sidecar.
class Metadata {
public:
  void set(const std::string& key, const std::string& value);
  void set(const std::string& key, const char* value) { set(key, std::string(value)); }
  void set(const std::string& key, double value);
  void set(const std::string& key, int value) { set(key, static_cast<long long>(value)); }
  void set(const std::string& key, long long value);
  void set(const std::string& key, std::size_t value) { set(key, static_cast<long long>(value)); }
  void set(const std::string& key, bool value) { set(key, std::string(value ? "true" : "false")); }
  /// Copy every entry of `other`, prefixing keys with `prefix`.
  void merge(const Metadata& other, const std::string& prefix = {});

  const std::string* find(const std::string& key) const;
  const std::vector<std::pair<std::string, std::string>>& entries() const noexcept { return entries_; }

  std::string to_string() const;

private:
  std::vector<std::pair<std::string, std::string>> entries_;
};

/// Parse a `.meta` / report document back into entries.
Metadata parse_metadata(const std::string& text);

/// CSV number formatting: 9 significant digits, `.` separator.
std::string csv_number(double v);

/// Writes `text` to `path` with LF line endings; throws IoError on failure.
void write_text_file(const std::filesystem::path& path, const std::string& text);
std::string read_text_file(const std::filesystem::path& path);

} // namespace t2x
