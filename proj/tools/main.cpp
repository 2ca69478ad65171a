#include <iostream>

#include "dualks/cli.hpp"

int main(int argc, char** argv) { return dualks::cli_main(argc, argv, std::cout, std::cerr); }
