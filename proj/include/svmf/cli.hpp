#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace svmf::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kFailure = 1;
inline constexpr int kUsage = 2;

/// Runs one subcommand (simulate | fit | path | select | skmeans | viz |
/// metrics). `args` excludes the program name. Errors go to `err` as a single
/// JSON object.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv);

}  // namespace svmf::cli
