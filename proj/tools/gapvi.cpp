#include <iostream>

#include "gapvi/cli.hpp"

int main(int argc, char** argv) { return gapvi::cli::run(argc, argv, std::cout, std::cerr); }
