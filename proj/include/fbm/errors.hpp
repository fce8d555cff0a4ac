#pragma once

#include <stdexcept>
#include <string>

namespace fbm {

// Malformed arguments: wrong lengths, exponents off the grid, bad names.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A request exceeds a documented cap (dimension, order, determinant).
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An identity that must hold exactly did not.
class ConsistencyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Chamber reduction hit its step cap.
class NonterminationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace fbm
