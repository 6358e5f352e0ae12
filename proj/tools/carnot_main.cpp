#include <iostream>

#include "carnot/cli.hpp"

int main(int argc, char** argv) { return carnot::cli::run(argc, argv, std::cout, std::cerr); }
