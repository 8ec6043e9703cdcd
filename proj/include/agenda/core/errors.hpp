#pragma once

#include <stdexcept>
#include <string>

namespace agenda {

// Exit code classes shared by the CLI and the validate suite.
enum class ExitCode : int {
  ok = 0,
  usage = 1,
  config_error = 2,
  data_error = 3,
  invariant_violation = 4,
};

// Bad configuration: missing paths, inconsistent thresholds, collinear model specs.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed or inconsistent input data.
struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A broken internal invariant (corrupt count tables, failed replay check).
// Always a bug or a tampered state file, never a user error.
struct InvariantError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace agenda
