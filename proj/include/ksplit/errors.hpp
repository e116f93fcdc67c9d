#pragma once

#include <stdexcept>
#include <string>

namespace ksplit {

// Error taxonomy mirrored by the CLI exit codes:
//   InputError       -> 1  (bad files, bad parameters, violated preconditions)
//   GeometryError    -> 1  (construction produced invalid geometry)
//   PrecisionError   -> 2  (numerical route failed to certify an answer)
//   EngineMismatch   -> 2  (the two linking engines disagree; never silently pick one)
//   ProtocolError    -> 1  (pipeline operation applied out of order)
//   SlopeMismatch    -> 3  (no common K-stabilization can exist)

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InputError : Error {
  using Error::Error;
};

struct GeometryError : Error {
  using Error::Error;
};

struct PrecisionError : Error {
  using Error::Error;
};

struct EngineMismatchError : Error {
  using Error::Error;
};

struct ProtocolError : Error {
  using Error::Error;
};

struct SlopeMismatchError : Error {
  int slope_a;
  int slope_b;
  SlopeMismatchError(int a, int b)
      : Error("slope mismatch: " + std::to_string(a) + " vs " + std::to_string(b) +
              "; no common K-stabilization exists"),
        slope_a(a),
        slope_b(b) {}
};

struct KnotMismatchError : Error {
  using Error::Error;
};

struct ManifoldMismatchError : Error {
  using Error::Error;
};

struct GluingError : Error {
  using Error::Error;
};

}  // namespace ksplit
