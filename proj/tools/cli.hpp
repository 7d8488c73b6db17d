#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace stegbmp::cli {

// Process exit codes. Stable for scripting.
enum ExitCode : int {
  kOk = 0,
  kIoError = 1,
  kKeyMismatch = 2,
  kCapacityExceeded = 3,
  kFormatError = 4,
};

// Environment variable consulted when no --key is given.
inline constexpr const char* kKeyEnvVar = "STEGO_KEY";

// Runs one command. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace stegbmp::cli
