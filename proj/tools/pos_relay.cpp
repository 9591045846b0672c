#include <iostream>

#include "posrelay/cli/commands.hpp"

int main(int argc, char** argv) {
    return posrelay::cli::run(argc, argv, std::cout, std::cerr);
}
