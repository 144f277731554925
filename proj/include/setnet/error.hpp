// Exception types shared across the library.
#pragma once

#include <stdexcept>
#include <string>

namespace setnet {

struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Input data does not describe a valid object.  CLI maps these to exit code 2.
struct InvalidInput : Error {
  using Error::Error;
};

struct MalformedTable : InvalidInput {
  using InvalidInput::InvalidInput;
};
struct UnknownPreset : InvalidInput {
  using InvalidInput::InvalidInput;
};
struct DimensionMismatch : InvalidInput {
  using InvalidInput::InvalidInput;
};
struct UnknownIrrep : InvalidInput {
  using InvalidInput::InvalidInput;
};
struct PathDisconnected : InvalidInput {
  using InvalidInput::InvalidInput;
};
struct InvalidNormalizerData : InvalidInput {
  using InvalidInput::InvalidInput;
};
struct ProtocolMismatch : InvalidInput {
  using InvalidInput::InvalidInput;
};
struct CocycleInvalid : InvalidInput {
  using InvalidInput::InvalidInput;
};
struct MissingSymmetryData : InvalidInput {
  using InvalidInput::InvalidInput;
};
struct UnboundSymbol : InvalidInput {
  using InvalidInput::InvalidInput;
};
struct UnknownTable : InvalidInput {
  using InvalidInput::InvalidInput;
};
struct UnsupportedPair : InvalidInput {
  using InvalidInput::InvalidInput;
};

// Resource limits.  CLI maps these to exit code 3.
struct TooLarge : Error {
  using Error::Error;
};
struct MemoryBudgetExceeded : TooLarge {
  using TooLarge::TooLarge;
};
struct SearchBudgetExceeded : TooLarge {
  using TooLarge::TooLarge;
};

// A verification step failed: the inputs are mathematically inconsistent with
// the requested operation.  CLI maps these to exit code 4.
struct VerificationError : Error {
  using Error::Error;
};

struct NumericalDegeneracy : VerificationError {
  using VerificationError::VerificationError;
};
struct NotNormal : VerificationError {
  using VerificationError::VerificationError;
};
struct NonIntegralMultiplicity : VerificationError {
  using VerificationError::VerificationError;
};
struct NotProjective : VerificationError {
  using VerificationError::VerificationError;
};
struct NotGaugeInvariant : VerificationError {
  using VerificationError::VerificationError;
};
struct NotInjective : VerificationError {
  using VerificationError::VerificationError;
};
struct NoGaugeFound : VerificationError {
  using VerificationError::VerificationError;
};
struct NotASymmetry : VerificationError {
  using VerificationError::VerificationError;
};

struct Unsupported : Error {
  using Error::Error;
};

}  // namespace setnet
