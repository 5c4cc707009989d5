#pragma once

#include <stdexcept>
#include <string>

namespace logbm {

// Error taxonomy used across the library. The CLI maps these to exit codes.
struct invalid_parameter : std::invalid_argument {
  explicit invalid_parameter(const std::string& msg) : std::invalid_argument(msg) {}
};

struct precondition_violation : std::runtime_error {
  explicit precondition_violation(const std::string& msg) : std::runtime_error(msg) {}
};

struct resource_limit : std::runtime_error {
  explicit resource_limit(const std::string& msg) : std::runtime_error(msg) {}
};

struct unsupported_operation : std::runtime_error {
  explicit unsupported_operation(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace logbm
