#include <iostream>
#include <string>
#include <vector>

#include "noisylearn/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return noisylearn::cli_dispatch(args, std::cout, std::cerr);
}
