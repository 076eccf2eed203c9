#include <iostream>
#include <string>
#include <vector>

#include "dynot/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv, argv + argc);
    return dynot::cli_main(args, std::cout, std::cerr);
}
