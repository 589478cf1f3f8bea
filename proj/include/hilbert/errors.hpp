#pragma once

#include <stdexcept>
#include <string>

namespace hilbert {

enum class ErrorCode {
  ZeroVector,
  ZeroImage,
  SingularMatrix,
  NotCollinear,
  DegenerateConfiguration,
  AtInfinity,
  TangentUnavailable,
  NotInterior,
  NotOnBoundary,
  NonSmoothPoint,
  NoConvergence,
  InvalidSpec,
  UnsupportedDimension,
  NotStrictlyConvex,
  ChartFailure,
  DegenerateDirection,
  PrecisionLimit,
  InsufficientSamples,
  NearDefective,
  NotBiproximal,
  InvalidDeterminant,
  NotHyperbolicType,
  InvalidParameter,
  ExplosionGuard,
  NotProperlyConvex,
  MonteCarloVariance,
  SpectrumTooSmall,
  ScaleUnderflow,
  InvalidBeta,
};

const char* error_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_name(code)) + ": " + what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

  // True for errors caused by bad input rather than numerics.
  bool is_config_error() const noexcept;

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace hilbert
