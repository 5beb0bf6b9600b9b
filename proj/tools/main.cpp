#include <iostream>
#include <string>
#include <vector>

#include "reflex/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv, argv + argc);
    return reflex::cli::run(args, std::cout, std::cerr);
}
