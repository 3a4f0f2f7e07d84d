#pragma once

#include <stdexcept>
#include <string>

namespace qplab {

enum class ErrorCode {
  invalid_argument,  // bad user input (family spec, subset, parameters)
  parse,             // malformed file; message carries the line number
  io,
  cap_exceeded,      // order / search-space / spectral caps
  not_a_group,       // table validation failure
  numeric,           // eigensolver non-convergence, degenerate diagonalization
  not_applicable,    // hypothesis or precondition not met
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

const char* to_string(ErrorCode code) noexcept;

}  // namespace qplab
