#pragma once

#include <stdexcept>
#include <string>

namespace t2x {

/// Invalid or inconsistent configuration (exit code 2).
class ConfigError : public std::runtime_error {
public:
  ConfigError(std::string key, const std::string& what)
      : std::runtime_error(what), key_(std::move(key)) {}
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}

  const std::string& key() const noexcept { return key_; }

private:
  std::string key_;
};

/// Input outside the validated physical domain (exit code 3).
class DomainError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

/// File-system or format failure (exit code 4).
class IoError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

} // namespace t2x
