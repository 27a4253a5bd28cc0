#include <iostream>
#include <string>
#include <vector>

#include "roca/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return roca::run_cli(std::move(args), std::cout, std::cerr);
}
