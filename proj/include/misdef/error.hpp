#pragma once

#include <stdexcept>
#include <string>

namespace misdef {

enum class ErrorCode {
  invalid_argument,  // malformed inputs (dimensions, parameter ranges)
  invalid_strategy,  // strategy indices or weights incompatible with the instance
  structure,         // instance shape unsuitable for the requested operation
  domain,            // numeric domain violations (infeasible points, bad ranges)
  resource,          // enumeration or iteration limits exceeded
  config,            // inconsistent configuration
  io,                // file read/write/parse failures
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

const char* error_code_name(ErrorCode code);

}  // namespace misdef
