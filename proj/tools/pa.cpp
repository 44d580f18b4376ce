#include <iostream>

#include "pa/cli.hpp"

int main(int argc, char** argv) {
    return pa::run_cli(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
