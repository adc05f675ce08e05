#pragma once

#include <stdexcept>
#include <string>

namespace wsnburst {

// Parameter outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Steady-state formula requested for a utilization >= 1.
class InstabilityError : public DomainError {
 public:
  using DomainError::DomainError;
};

// Config file could not be parsed or failed validation. `field` names the
// offending key when known.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& what)
      : std::runtime_error(field.empty() ? what : field + ": " + what), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

}  // namespace wsnburst
