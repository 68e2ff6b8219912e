#include <iostream>
#include <string>
#include <vector>

#include "c2r/cli/commands.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv, argv + argc);
    return c2r::cli::run_cli(args, std::cin, std::cout, std::cerr);
}
