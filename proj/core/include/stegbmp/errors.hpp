#pragma once

#include <stdexcept>
#include <string>

namespace stegbmp {

// Base for every error raised by the library. Messages never contain key
// material.
class StegoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed BMP, trailer, directory or token stream.
class FormatError : public StegoError {
 public:
  using StegoError::StegoError;
};

// Not enough LSB slots in the container data part.
class CapacityExceeded : public StegoError {
 public:
  using StegoError::StegoError;
};

// Key tag or in-stream delimiter did not match the supplied key.
class KeyMismatch : public StegoError {
 public:
  using StegoError::StegoError;
};

// Raised by unwrap_delimiters; surfaces to extract() as a KeyMismatch.
class DelimiterMismatch : public KeyMismatch {
 public:
  using KeyMismatch::KeyMismatch;
};

// Structural-reuse was requested but no identical structural part exists.
class StructuralMismatch : public StegoError {
 public:
  using StegoError::StegoError;
};

class IndexOutOfRange : public StegoError {
 public:
  using StegoError::StegoError;
};

}  // namespace stegbmp
