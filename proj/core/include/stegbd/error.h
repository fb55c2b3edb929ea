#ifndef STEGBD_ERROR_H_
#define STEGBD_ERROR_H_

#include <stdexcept>
#include <string>

namespace stegbd {

// Base of every error the library throws. Callers that only care whether an
// operation failed can catch this; the CLI maps subclasses onto exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Image or plane geometry is not what the operation requires.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// Payload does not fit in the carrier.
class CapacityError : public Error {
 public:
  using Error::Error;
};

// An embedded bit did not survive 8-bit rounding / clamping.
class VerificationError : public Error {
 public:
  using Error::Error;
};

// Malformed file or byte stream.
class FormatError : public Error {
 public:
  using Error::Error;
};

// Invalid configuration or arguments.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace stegbd

#endif  // STEGBD_ERROR_H_
