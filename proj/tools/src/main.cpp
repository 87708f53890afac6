#include <iostream>

#include "spectral_walks/cli/cli.hpp"

int main(int argc, char** argv) { return spectral_walks::cli::run(argc, argv, std::cout, std::cerr); }
