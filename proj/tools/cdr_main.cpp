#include <iostream>
#include <string>
#include <vector>

#include "cdr/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return cdr::cli::run(args, std::cout, std::cerr);
}
