#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace lf::cli {

enum ExitCode { kOk = 0, kParse = 2, kConsistency = 3, kResource = 4 };

inline constexpr const char* kReportSchema = "lfh-report/1";

// Runs one command line (without the program name). Reports go to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// FNV-1a 64, printed as 16 hex digits
std::string digest(const std::string& bytes);

}  // namespace lf::cli
