#pragma once

#include <stdexcept>
#include <string>

namespace perspectra {

/// Base class for all library errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Extended arithmetic
struct IndeterminateSum : Error { using Error::Error; };
struct BadScale : Error { using Error::Error; };

// Construction / parameter validation
struct BadParam : Error { using Error::Error; };
struct FlagViolation : Error { using Error::Error; };
struct EmptyIntersection : Error { using Error::Error; };
struct BadWitness : Error { using Error::Error; };
struct BadWeights : Error { using Error::Error; };

// Oracle availability and numeric outcomes
struct MissingOracle : Error { using Error::Error; };
struct Unsupported : Error { using Error::Error; };
struct NoWitness : Error { using Error::Error; };
struct NotConverged : Error { using Error::Error; };
struct AllInfinite : Error { using Error::Error; };
struct SamplerExhausted : Error { using Error::Error; };
struct OverflowGuard : Error { using Error::Error; };

// I/O
struct DataError : Error { using Error::Error; };

}  // namespace perspectra
