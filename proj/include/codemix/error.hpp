#pragma once

#include <stdexcept>
#include <string>

namespace codemix {

// Malformed or inconsistent input data (bad TSV rows, unknown labels, id
// mismatches). The CLI maps this to exit status 2.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid configuration or arguments. The CLI maps this to exit status 1.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace codemix
