#pragma once

#include <stdexcept>
#include <string>

namespace coevgan {

/// A NaN or infinity appeared in a loss, gradient or parameter update.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid or inconsistent experiment configuration. `field` names the offending key.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& message)
      : std::runtime_error(field + ": " + message), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

/// Recorded instrumentation counters disagree with their closed-form expectation.
class AuditFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace coevgan
