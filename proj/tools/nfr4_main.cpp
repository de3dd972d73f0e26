#include <iostream>

#include "nfr4/cli.hpp"

int main(int argc, char** argv) { return nfr4::cli::main(argc, argv, std::cin, std::cout, std::cerr); }
