#pragma once

#include <stdexcept>
#include <string>

namespace fermizones {

// Bad user input or violated precondition (CLI exit code 2).
struct ValidationError : std::runtime_error {
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// Numerical failure inside an otherwise valid computation (CLI exit code 3).
struct NumericalError : std::runtime_error {
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace fermizones
