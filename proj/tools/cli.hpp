#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace rpca::cli {

/// Entry point of the `rpca` tool. Returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Convenience overload; args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rpca::cli
