#pragma once

#include <stdexcept>
#include <string>

namespace klasr {

/// Malformed or incompatible input data: unreadable files, bad magic bytes,
/// dimension mismatches, unknown config keys.
class DataError : public std::runtime_error {
 public:
  explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Numerical breakdown: singular matrices, zero-variance input, unstable
/// models, invalid autocorrelation sequences.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace klasr
