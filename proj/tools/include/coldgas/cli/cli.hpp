#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace coldgas::cli {

// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;    // unknown command, malformed or invalid flag
inline constexpr int kExitCompute = 3;  // error raised by a numerical module
inline constexpr int kExitIo = 4;       // output file could not be written

/// Runs one command line (without the program name). Results go to `out`
/// or to the file named by --out; machine-readable errors go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace coldgas::cli
