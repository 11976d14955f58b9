#include <iostream>

#include "dwpf/cli.hpp"

int main(int argc, char** argv) { return dwpf::cli::run(argc, argv, std::cout, std::cerr); }
