#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace seerisk::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;  // bad configuration or input
inline constexpr int kExitData = 3;    // bad data or runtime failure

/// Runs one command line, without the program name. Never throws.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace seerisk::cli
