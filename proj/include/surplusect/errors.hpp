#pragma once

#include <stdexcept>
#include <string>

namespace surplusect {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Matrix failed the unitarity check.
class NotUnitary : public Error {
 public:
  using Error::Error;
};

class ZeroVector : public Error {
 public:
  using Error::Error;
};

class NotUnit : public Error {
 public:
  using Error::Error;
};

class DimMismatch : public Error {
 public:
  using Error::Error;
};

/// Geometry too close to a non-generic configuration to certify at working precision.
class Degenerate : public Error {
 public:
  using Error::Error;
};

class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

class InsufficientCells : public Error {
 public:
  using Error::Error;
};

/// Refined critical points drifted too far from their mesh seeds, or the
/// Euler characteristic did not close; critical points were probably missed.
class MeshTooCoarse : public Error {
 public:
  using Error::Error;
};

class StructureViolation : public Error {
 public:
  using Error::Error;
};

/// A certified-transverse count fell outside the admissible even range.
class ParityViolation : public Error {
 public:
  using Error::Error;
};

}  // namespace surplusect
