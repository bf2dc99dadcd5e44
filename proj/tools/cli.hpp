#pragma once

#include <iosfwd>

namespace qos::cli {

enum ExitCode : int {
  kOk = 0,
  kValidationError = 2,
  kBudgetRefusal = 3,
  kInvariantViolation = 4,
};

// Entry point shared by the qosgame binary and the CLI tests.
int Run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace qos::cli
