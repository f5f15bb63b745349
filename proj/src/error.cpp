#include "gammalab/error.hpp"

namespace gammalab {

const char* errc_name(Errc c) {
  switch (c) {
    case Errc::NotPrime: return "NotPrime";
    case Errc::TooLarge: return "TooLarge";
    case Errc::DivideByZero: return "DivideByZero";
    case Errc::NotInSubfield: return "NotInSubfield";
    case Errc::ZeroHasNoLog: return "ZeroHasNoLog";
    case Errc::Singular: return "Singular";
    case Errc::ZeroScalar: return "ZeroScalar";
    case Errc::NotRegular: return "NotRegular";
    case Errc::OracleFailed: return "OracleFailed";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::MalformedShalikaElement: return "MalformedShalikaElement";
    case Errc::ShalikaVectorPresent: return "ShalikaVectorPresent";
    case Errc::NonConstantRatio: return "NonConstantRatio";
    case Errc::UnsupportedN: return "UnsupportedN";
    case Errc::PreconditionViolated: return "PreconditionViolated";
    case Errc::DimensionBoundViolated: return "DimensionBoundViolated";
  }
  return "Unknown";
}

}  // namespace gammalab
