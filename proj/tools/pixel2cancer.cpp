#include <iostream>

#include "p2c/cli.hpp"

int main(int argc, char** argv) { return p2c::cli::run(argc, argv, std::cout, std::cerr); }
