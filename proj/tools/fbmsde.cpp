#include <iostream>

#include "fbmsde/cli/commands.hpp"

int main(int argc, char** argv) {
    return fbmsde::cli::run_cli(argc, argv, std::cout, std::cerr);
}
