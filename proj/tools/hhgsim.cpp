#include <iostream>

#include "hhg/cli.hpp"

int main(int argc, char** argv) { return hhg::cli_dispatch(argc, argv, std::cout, std::cerr); }
