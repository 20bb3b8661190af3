#pragma once

#include <stdexcept>
#include <string>

namespace plp {

/// Error categories. The numeric values double as CLI exit codes.
enum class ErrorKind {
  Usage = 1,
  Semantic = 2,  // syntax and static-check failures
  Unsound = 3,   // some total choice has a three-valued well-founded model
  ZeroProbability = 4,
  ResourceLimit = 5,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }
  int exit_code() const noexcept { return static_cast<int>(kind_); }

 private:
  ErrorKind kind_;
};

}  // namespace plp
