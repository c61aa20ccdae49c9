#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace blpc {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Image, window or field dimensions are incompatible with the operation.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A parameter or configuration value is out of its valid domain.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// The input carries no usable signal (e.g. an all-zero correlation window).
class DegenerateInputError : public Error {
 public:
  using Error::Error;
};

/// Malformed text or binary header. `offset()` is the byte position where
/// parsing stopped.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t offset)
      : Error(what + " (at byte " + std::to_string(offset) + ")"), offset_(offset) {}

  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

/// The file is well-formed but uses a feature we do not read (e.g. 16-bit).
class UnsupportedFormatError : public Error {
 public:
  using Error::Error;
};

/// Wrong magic number / sanity tag.
class FormatError : public Error {
 public:
  using Error::Error;
};

/// Payload shorter or longer than the header announces.
class LengthError : public Error {
 public:
  using Error::Error;
};

/// Invalid synthetic scene description.
class SpecError : public Error {
 public:
  using Error::Error;
};

/// Filesystem failure while reading or writing.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace blpc
