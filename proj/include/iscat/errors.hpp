#pragma once

#include <stdexcept>
#include <string>

namespace iscat {

enum class ErrorCode {
  InvalidInput = 10,
  Domain = 11,
  OverflowGuard = 20,
  IllConditionedFit = 21,
  ContourZero = 22,
  NonConvergedNewton = 23,
  PoleOnRay = 30,
  UnsupportedRange = 31,
  QuadratureNotConverged = 32,
  BranchCut = 33,
  BlowupDetected = 40,
  NonIntegrableRHS = 50,
};

const char* error_name(ErrorCode c);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace iscat
