#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace lgsim::cli {

// Exit statuses shared by every subcommand.
enum ExitCode : int {
  kOk = 0,
  kUsage = 1,       // bad flags, unreadable or malformed input documents
  kValidation = 2,  // inputs parse but violate a model constraint
  kRuntime = 3,     // degenerate filters, empty search, I/O failures
};

// Runs `lgsim <args...>`; args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace lgsim::cli
