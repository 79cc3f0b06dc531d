#include <iostream>

#include "ccpslice/cli.hpp"

int main(int argc, char** argv) { return ccpslice::cli::run(argc, argv, std::cin, std::cout, std::cerr); }
