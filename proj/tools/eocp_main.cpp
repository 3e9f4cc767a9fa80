#include <iostream>

#include "eocp/cli.hpp"

int main(int argc, char** argv) { return eocp::run_cli(argc, argv, std::cout, std::cerr); }
