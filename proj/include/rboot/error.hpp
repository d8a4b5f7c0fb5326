#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace rboot {

enum class ErrorKind {
  invalid_input,
  parse_error,
  separable,
  singular_hessian,
  not_converged,
  leverage_degenerate,
  curve_not_bracketing,
  zero_mle,
  too_many_failures,
  insufficient_samples,
  poisson_overflow,
};

std::string_view to_string(ErrorKind kind);

/// Failure carrying a machine-readable kind; the CLI serializes both fields.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace rboot
