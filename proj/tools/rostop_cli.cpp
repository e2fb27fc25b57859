#include <iostream>

#include "rostop/cli.hpp"

int main(int argc, char** argv) { return rostop::run_cli(argc, argv, std::cout, std::cerr); }
