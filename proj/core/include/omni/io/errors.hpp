#pragma once

#include <stdexcept>

namespace omni {

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InsufficientOverlap : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace omni
