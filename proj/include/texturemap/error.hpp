#pragma once

#include <stdexcept>
#include <string>

namespace texturemap {

/// Base class for all texturemap errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// File missing, unreadable, or unwritable.
class IoError : public Error {
 public:
  using Error::Error;
};

/// Input is not one of the supported formats (bad magic, ASCII PNM, 16-bit maxval, ...).
class FormatError : public Error {
 public:
  using Error::Error;
};

/// Input claims a supported format but its contents are truncated or inconsistent.
class DataError : public Error {
 public:
  using Error::Error;
};

/// A caller-supplied value is outside its documented range, or a precondition fails.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A numeric computation cannot proceed (degenerate input reached mid-pipeline).
class ComputeError : public Error {
 public:
  using Error::Error;
};

}  // namespace texturemap
