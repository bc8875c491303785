#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace pvstab {

enum class ErrorKind {
  NonFiniteInput,
  HyperbolicityViolated,
  InterfaceConstraintViolated,
  ExpansionViolated,
  EpsilonOutOfRange,
  CollinearFields,
  NotPCase,
  DegenerateDenominator,
  UnsupportedCase,
  ConsistencyViolation,
  InvalidInput,
  IOError,
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace pvstab
