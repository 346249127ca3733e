#include <iostream>

#include "ustlab/cli.hpp"

int main(int argc, char** argv) { return ustlab::cli::run_cli(argc, argv, std::cout, std::cerr); }
