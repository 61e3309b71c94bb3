#pragma once

#include <stdexcept>
#include <string>

namespace forceflow {

// Bad inputs: malformed config, out-of-range arguments, inconsistent shapes.
// Maps to process exit code 2.
class ValidationError : public std::invalid_argument {
 public:
  explicit ValidationError(const std::string& msg) : std::invalid_argument(msg) {}
};

// Failures at run time: diverged simulation, failed expert, broken files.
// Maps to process exit code 3.
class PipelineError : public std::runtime_error {
 public:
  explicit PipelineError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace forceflow
