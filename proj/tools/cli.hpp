#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace seqnms::cli {

/// Runs the `seqnms` command line. `args` excludes the program name.
/// Returns the process exit status.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Thread count used when --threads is not given: $SEQNMS_THREADS if set to
/// a positive integer, otherwise the hardware concurrency.
unsigned default_thread_count();

}  // namespace seqnms::cli
