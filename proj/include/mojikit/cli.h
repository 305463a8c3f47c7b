// Command-line front end. Kept as a library function so tests can drive it.

#ifndef MOJIKIT_CLI_H_
#define MOJIKIT_CLI_H_

#include <ostream>
#include <string>
#include <vector>

namespace mojikit {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitParse = 2,
  kExitValidation = 3,
  kExitRuntime = 4,
};

// `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mojikit

#endif  // MOJIKIT_CLI_H_
