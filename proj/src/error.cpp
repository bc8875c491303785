#include "pvstab/error.hpp"

namespace pvstab {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NonFiniteInput: return "NonFiniteInput";
    case ErrorKind::HyperbolicityViolated: return "HyperbolicityViolated";
    case ErrorKind::InterfaceConstraintViolated: return "InterfaceConstraintViolated";
    case ErrorKind::ExpansionViolated: return "ExpansionViolated";
    case ErrorKind::EpsilonOutOfRange: return "EpsilonOutOfRange";
    case ErrorKind::CollinearFields: return "CollinearFields";
    case ErrorKind::NotPCase: return "NotPCase";
    case ErrorKind::DegenerateDenominator: return "DegenerateDenominator";
    case ErrorKind::UnsupportedCase: return "UnsupportedCase";
    case ErrorKind::ConsistencyViolation: return "ConsistencyViolation";
    case ErrorKind::InvalidInput: return "InvalidInput";
    case ErrorKind::IOError: return "IOError";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

}  // namespace pvstab
