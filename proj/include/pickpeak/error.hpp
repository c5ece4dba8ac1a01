#pragma once

#include <stdexcept>
#include <string>

namespace pickpeak {

enum class ErrorKind {
  invalid_argument,
  domain_violation,
  degenerate_expression,
  range_violation,
  computation,
  unsolvable,
  infeasible,
  search_exhausted,
  certification_failed,
  parse,
  schema,
};

const char* to_string(ErrorKind kind) noexcept;

/// Base exception for every failure raised by the library.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace pickpeak
