#include <iostream>

#include "nlfrac/cli_io.hpp"

int main(int argc, char** argv) { return nlfrac::cli_main(argc, argv, std::cout, std::cerr); }
