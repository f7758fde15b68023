#include "trikurve/error.hpp"

namespace trikurve {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kOutOfChart: return "OutOfChart";
    case ErrorCode::kUnsupported: return "Unsupported";
    case ErrorCode::kSpaceFormDegenerate: return "SpaceFormDegenerate";
    case ErrorCode::kCurvatureVanishes: return "CurvatureVanishes";
    case ErrorCode::kTooFewSamples: return "TooFewSamples";
    case ErrorCode::kNegativeRadicand: return "NegativeRadicand";
    case ErrorCode::kStalledAtDoubleRoot: return "StalledAtDoubleRoot";
    case ErrorCode::kDegenerateDenominator: return "DegenerateDenominator";
    case ErrorCode::kNegativeTorsionSquare: return "NegativeTorsionSquare";
    case ErrorCode::kNotAHelix: return "NotAHelix";
    case ErrorCode::kResidualTooLarge: return "ResidualTooLarge";
    case ErrorCode::kGeodesicInput: return "GeodesicInput";
    case ErrorCode::kConstraintViolated: return "ConstraintViolated";
    case ErrorCode::kNonUnitSpeed: return "NonUnitSpeed";
    case ErrorCode::kBlowUp: return "BlowUp";
    case ErrorCode::kDivisionByZero: return "DivisionByZero";
    case ErrorCode::kTooFewVertices: return "TooFewVertices";
    case ErrorCode::kNonUniform: return "NonUniform";
    case ErrorCode::kParseError: return "ParseError";
  }
  return "Unknown";
}

}  // namespace trikurve
