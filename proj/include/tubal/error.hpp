#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace tubal {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
public:
  using Error::Error;
};

class IndexOutOfRange : public Error {
public:
  using Error::Error;
};

class InvalidArgument : public Error {
public:
  using Error::Error;
};

/// A tube whose Fourier coefficients are too small (relative to its largest
/// one) to be inverted in the tubal algebra.
class NearSingularTube : public Error {
public:
  using Error::Error;
};

/// A Fourier frontal slice that cannot be inverted.
class SingularSlice : public Error {
public:
  SingularSlice(std::size_t slice, const std::string &what)
      : Error(what), slice_(slice) {}
  std::size_t slice() const noexcept { return slice_; }

private:
  std::size_t slice_;
};

/// Inverse transform produced a non-negligible imaginary part for data that
/// should be real, i.e. conjugate symmetry was broken upstream.
class SymmetryViolation : public Error {
public:
  using Error::Error;
};

class IoError : public Error {
public:
  using Error::Error;
};

class FormatError : public Error {
public:
  using Error::Error;
};

/// Observation masks must contain at least one observed entry.
class MaskError : public Error {
public:
  using Error::Error;
};

} // namespace tubal
