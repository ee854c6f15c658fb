#ifndef ADARADAR_ERRORS_HPP
#define ADARADAR_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace adaradar {

// Base class for everything thrown by this library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Tensor/block shape problems (non-divisible dimensions, shape mismatch).
class DimensionError : public Error {
 public:
  using Error::Error;
};

// Parameter outside its documented range (pruning ratio, bit width, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// Container-level problems: bad magic, unsupported version, malformed header.
class FormatError : public Error {
 public:
  using Error::Error;
};

// Payload-level problems: truncation, out-of-range index, code overflow.
class CorruptPayloadError : public Error {
 public:
  using Error::Error;
};

}  // namespace adaradar

#endif  // ADARADAR_ERRORS_HPP
