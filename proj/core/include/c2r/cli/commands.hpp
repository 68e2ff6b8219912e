#pragma once

#include <istream>
#include <ostream>
#include <string>
#include <vector>

namespace c2r::cli {

// Exit codes shared by the subcommands.
inline constexpr int kExitOk = 0;
inline constexpr int kExitIo = 1;
inline constexpr int kExitParse = 2;
inline constexpr int kExitToolchain = 3;

// Whole command line, argv[0] included. Reads stdin from `in` for
// `analyze -`.
int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace c2r::cli
