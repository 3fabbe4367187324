#include "zt/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return zt::run_cli(argc, argv, std::cout, std::cerr); }
