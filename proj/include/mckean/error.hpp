#ifndef MCKEAN_ERROR_HPP
#define MCKEAN_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace mckean {

enum class ErrorCode {
  InvalidPolynomial,
  InvalidModel,
  NonconfiningPotential,
  ToleranceNotReached,
  DegenerateMinimum,
  BoundaryMinimum,
  OddOrderContact,
  ZeroMinimizer,
  DomainError,
  LengthMismatch,
  SingularSystem,
  NotConverged,
  WrongPotential,
  Blowup,
  InvalidConfig,
  ParseError,
  IoError,
};

constexpr std::string_view to_string(ErrorCode c) {
  switch (c) {
    case ErrorCode::InvalidPolynomial: return "InvalidPolynomial";
    case ErrorCode::InvalidModel: return "InvalidModel";
    case ErrorCode::NonconfiningPotential: return "NonconfiningPotential";
    case ErrorCode::ToleranceNotReached: return "ToleranceNotReached";
    case ErrorCode::DegenerateMinimum: return "DegenerateMinimum";
    case ErrorCode::BoundaryMinimum: return "BoundaryMinimum";
    case ErrorCode::OddOrderContact: return "OddOrderContact";
    case ErrorCode::ZeroMinimizer: return "ZeroMinimizer";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::SingularSystem: return "SingularSystem";
    case ErrorCode::NotConverged: return "NotConverged";
    case ErrorCode::WrongPotential: return "WrongPotential";
    case ErrorCode::Blowup: return "Blowup";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace mckean

#endif  // MCKEAN_ERROR_HPP
