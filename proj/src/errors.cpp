#include "hilbert/errors.hpp"

namespace hilbert {

const char* error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::ZeroVector: return "ZeroVector";
    case ErrorCode::ZeroImage: return "ZeroImage";
    case ErrorCode::SingularMatrix: return "SingularMatrix";
    case ErrorCode::NotCollinear: return "NotCollinear";
    case ErrorCode::DegenerateConfiguration: return "DegenerateConfiguration";
    case ErrorCode::AtInfinity: return "AtInfinity";
    case ErrorCode::TangentUnavailable: return "TangentUnavailable";
    case ErrorCode::NotInterior: return "NotInterior";
    case ErrorCode::NotOnBoundary: return "NotOnBoundary";
    case ErrorCode::NonSmoothPoint: return "NonSmoothPoint";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::InvalidSpec: return "InvalidSpec";
    case ErrorCode::UnsupportedDimension: return "UnsupportedDimension";
    case ErrorCode::NotStrictlyConvex: return "NotStrictlyConvex";
    case ErrorCode::ChartFailure: return "ChartFailure";
    case ErrorCode::DegenerateDirection: return "DegenerateDirection";
    case ErrorCode::PrecisionLimit: return "PrecisionLimit";
    case ErrorCode::InsufficientSamples: return "InsufficientSamples";
    case ErrorCode::NearDefective: return "NearDefective";
    case ErrorCode::NotBiproximal: return "NotBiproximal";
    case ErrorCode::InvalidDeterminant: return "InvalidDeterminant";
    case ErrorCode::NotHyperbolicType: return "NotHyperbolicType";
    case ErrorCode::InvalidParameter: return "InvalidParameter";
    case ErrorCode::ExplosionGuard: return "ExplosionGuard";
    case ErrorCode::NotProperlyConvex: return "NotProperlyConvex";
    case ErrorCode::MonteCarloVariance: return "MonteCarloVariance";
    case ErrorCode::SpectrumTooSmall: return "SpectrumTooSmall";
    case ErrorCode::ScaleUnderflow: return "ScaleUnderflow";
    case ErrorCode::InvalidBeta: return "InvalidBeta";
  }
  return "Unknown";
}

bool Error::is_config_error() const noexcept {
  switch (code_) {
    case ErrorCode::InvalidSpec:
    case ErrorCode::InvalidParameter:
    case ErrorCode::InvalidDeterminant:
    case ErrorCode::NotHyperbolicType:
    case ErrorCode::UnsupportedDimension:
    case ErrorCode::InvalidBeta:
    case ErrorCode::NotStrictlyConvex:
    case ErrorCode::ExplosionGuard:
      return true;
    default:
      return false;
  }
}

}  // namespace hilbert
