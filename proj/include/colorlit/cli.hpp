#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace colorlit::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;
inline constexpr int kExitIo = 3;

inline constexpr const char* kVersion = "0.1.0";

/// Runs the `colorlit` command line. argv[0] is the program name.
int run(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err);

}  // namespace colorlit::cli
