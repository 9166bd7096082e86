#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace astopo::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kUsageError = 2;
inline constexpr int kEmptyResult = 3;

// Runs the astopo command line (args excludes the program name). Worker
// parallelism is capped by `threads` (0 = auto); the executable takes it
// from ASTOPO_THREADS.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, unsigned threads = 0);

// Parses ASTOPO_THREADS; unset or empty means 0 (auto). Returns false on a
// malformed value.
bool threads_from_env(unsigned& threads);

}  // namespace astopo::cli
