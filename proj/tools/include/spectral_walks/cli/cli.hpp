#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace spectral_walks::cli {

enum ExitCode : int { kOk = 0, kCheckFailed = 1, kInvalidInput = 2 };

/// Entry point shared by the executable and the tests. argv[0] is the
/// program name. Reports go to `out` unless --output names a file.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Worker count: SPECTRAL_WALKS_THREADS if set to a positive integer,
/// otherwise the hardware concurrency.
unsigned worker_threads();

}  // namespace spectral_walks::cli
