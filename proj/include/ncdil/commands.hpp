#pragma once

// Command-line front end. Each subcommand writes ResultRecords as JSON lines.
//
// Exit codes: 0 ok, 2 usage, 3 failed certificate, 4 resource cap, 1 other.

#include "ncdil/records.hpp"

#include <ostream>
#include <string>
#include <vector>

namespace ncdil {

enum ExitCode : int { kExitOk = 0, kExitOther = 1, kExitUsage = 2, kExitCertificate = 3, kExitResource = 4 };

struct CommandOutcome {
  int exit_code = kExitOk;
  std::vector<ResultRecord> records;
};

/// args excludes the program name. Records are also written to `out`,
/// diagnostics to `err`.
CommandOutcome run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Thread count from NCDIL_THREADS when set, else the OpenMP default.
int configured_threads();

}  // namespace ncdil
