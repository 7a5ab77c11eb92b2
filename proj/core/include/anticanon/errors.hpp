#pragma once

#include <stdexcept>
#include <string>

namespace anticanon {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An input violates a documented precondition (shape, anti-commutation, rank).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

class CommutationViolation : public Error {
 public:
  using Error::Error;
};

/// A matrix (or a restriction of one) has deficient eigenspaces.
/// `leak` is the invariance defect of the subspace the restriction was taken on.
class NotDiagonalizable : public Error {
 public:
  NotDiagonalizable(const std::string& what, double leak) : Error(what), leak_(leak) {}
  double leak() const noexcept { return leak_; }

 private:
  double leak_;
};

/// A diagonalizable member acts nonzero on a subspace where its square vanishes.
class InconsistentSpectrum : public Error {
 public:
  using Error::Error;
};

class OddDimension : public Error {
 public:
  using Error::Error;
};

class SingularB : public Error {
 public:
  using Error::Error;
};

class NonConstantSquare : public Error {
 public:
  using Error::Error;
};

/// A Clifford block cannot be halved as the recursion requires.
class DimensionObstruction : public Error {
 public:
  using Error::Error;
};

class InvalidSpec : public Error {
 public:
  using Error::Error;
};

/// Malformed or unreadable input file. The message names the offending field.
class FormatError : public Error {
 public:
  using Error::Error;
};

}  // namespace anticanon
