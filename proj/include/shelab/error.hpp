#pragma once

#include <stdexcept>
#include <string>

namespace shelab {

// Every failure carries a short machine-readable code ("vocab-mismatch",
// "arity-mismatch", ...) plus free-form detail.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& detail = {})
      : std::runtime_error(detail.empty() ? code : code + ": " + detail),
        code_(std::move(code)) {}

  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

// Raised when a corpus or search would exceed a hard-coded ceiling.
class BudgetError : public Error {
 public:
  using Error::Error;
};

}  // namespace shelab
