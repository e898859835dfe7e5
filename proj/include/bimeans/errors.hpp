#pragma once

#include <stdexcept>
#include <string>

namespace bimeans {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A pair component was non-positive, NaN or infinite.
class InvalidPair : public Error {
 public:
  using Error::Error;
};

/// The operation needs a != b (a strict inequality degenerates at the diagonal).
class DegeneratePair : public Error {
 public:
  using Error::Error;
};

/// Arguments lie outside the operation's domain, e.g. Ky Fan pairs outside (0, 1/2).
class OutOfDomain : public Error {
 public:
  using Error::Error;
};

/// A scalar parameter (blend weight, lemma exponent, sample count, ...) is out of range.
class ParamOutOfRange : public Error {
 public:
  using Error::Error;
};

/// Two independent routes to the same quantity disagree beyond tolerance.
class InternalInconsistency : public Error {
 public:
  using Error::Error;
};

/// A sampled lemma function had the wrong sign; witness() is the offending t.
class SignViolation : public Error {
 public:
  SignViolation(const std::string& what, double witness)
      : Error(what), witness_(witness) {}

  double witness() const noexcept { return witness_; }

 private:
  double witness_;
};

}  // namespace bimeans
