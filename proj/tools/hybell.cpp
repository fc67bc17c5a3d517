#include <iostream>

#include "hybell/cli.hpp"

int main(int argc, char** argv) { return hybell::cli::run(argc, argv, std::cout, std::cerr); }
