#include <iostream>

#include "phc/cli.hpp"

int main(int argc, char** argv) { return phc::cli::run(argc, argv, std::cout, std::cerr); }
