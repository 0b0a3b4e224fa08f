#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "contamix/points.hpp"

namespace contamix::cli {

/// Process exit codes.
enum ExitCode : int {
  kSuccess = 0,
  kUsageError = 1,
  kDataError = 2,
  kCertificationFailed = 3,
};

/// Runs one invocation; args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Headerless CSV, one observation per line with `dim` comma-separated
/// coordinates. Blank lines are skipped; anything else malformed throws
/// DataError-class exceptions naming the line.
Points read_points(const std::string& path, std::size_t dim);

/// Worker count from CONTAMIX_WORKERS, or hardware concurrency when unset/invalid.
std::size_t env_workers();

}  // namespace contamix::cli
