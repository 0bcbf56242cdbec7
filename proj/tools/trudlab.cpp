#include <iostream>
#include <string>
#include <vector>

#include "trudlab/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return trudlab::cli::run(args, std::cout, std::cerr);
}
