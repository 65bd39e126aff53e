#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace sgsim {

// Malformed scenario document (not even parseable).
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A scenario invariant was violated; `field()` names the offending field.
class ValidationError : public std::runtime_error {
 public:
  ValidationError(std::string field, const std::string& detail)
      : std::runtime_error(field + ": " + detail), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

// A module precondition or postcondition failed. Internal bug guard.
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// A contract tripped inside the tick loop; carries the tick it happened at.
class InternalInvariantError : public std::runtime_error {
 public:
  InternalInvariantError(std::int64_t tick_t, const std::string& detail)
      : std::runtime_error("tick " + std::to_string(tick_t) + ": " + detail),
        tick_t_(tick_t) {}

  std::int64_t tick() const noexcept { return tick_t_; }

 private:
  std::int64_t tick_t_;
};

}  // namespace sgsim
