#pragma once

#include <stdexcept>
#include <string>

namespace samgsr {

// Malformed or inconsistent input files / arguments.  CLI exit code 2.
struct io_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Inputs that parse fine but are statistically unusable
// (one-class cohorts, every cell unusable, ...).  CLI exit code 3.
struct data_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace samgsr
