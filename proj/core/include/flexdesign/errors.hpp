#pragma once

#include <stdexcept>
#include <string>

namespace flexdesign {

/// An instance (means, distributions, family parameters) that cannot be modelled.
class InvalidInstance : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Inputs that disagree with each other or with a documented precondition.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Exhaustive enumeration requested on more nodes than the configured cap.
class TooLarge : public std::length_error {
 public:
  using std::length_error::length_error;
};

/// Filesystem or parse failure; the message carries the offending path.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace flexdesign
