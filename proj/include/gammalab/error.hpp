#pragma once

#include <stdexcept>
#include <string>

namespace gammalab {

enum class Errc {
  NotPrime,
  TooLarge,
  DivideByZero,
  NotInSubfield,
  ZeroHasNoLog,
  Singular,
  ZeroScalar,
  NotRegular,
  OracleFailed,
  DimensionMismatch,
  MalformedShalikaElement,
  ShalikaVectorPresent,
  NonConstantRatio,
  UnsupportedN,
  PreconditionViolated,
  DimensionBoundViolated,
};

const char* errc_name(Errc c);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}
  Errc code() const { return code_; }

 private:
  Errc code_;
};

}  // namespace gammalab
