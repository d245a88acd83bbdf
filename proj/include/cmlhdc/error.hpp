#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace cmlhdc {

enum class ErrorKind {
  invalid_argument,
  invalid_dimension,
  undefined_similarity,
  training_failure,
  illegal_move,
  generation_failure,
  parse_error,
  io_error,
  verification_failure,
  missing_model,
};

std::string_view to_string(ErrorKind kind) noexcept;

// Single exception type for the library; the kind drives CLI diagnostics and exit codes.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

  [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace cmlhdc
