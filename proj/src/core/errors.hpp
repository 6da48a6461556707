//===- errors.hpp - Error types shared across the analyzer ----------------===//
//
// Part of the fmr project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//

#ifndef FMR_CORE_ERRORS_HPP
#define FMR_CORE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace fmr {

/// Base class for all analyzer-reported failures.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string &msg) : std::runtime_error(msg) {}
};

/// Malformed input document (program text, FMB table, failure data).
/// Carries a 1-based position for diagnostics; 0 means "not applicable".
class ParseError : public Error {
public:
  ParseError(const std::string &msg, int line, int col)
      : Error(format(msg, line, col)), line_(line), col_(col) {}

  int line() const { return line_; }
  int col() const { return col_; }

private:
  static std::string format(const std::string &msg, int line, int col) {
    if (line <= 0)
      return msg;
    return std::to_string(line) + ":" + std::to_string(col) + ": " + msg;
  }

  int line_;
  int col_;
};

} // namespace fmr

#endif // FMR_CORE_ERRORS_HPP
