#include <iostream>

#include "fraclap/cli.hpp"

int main(int argc, char** argv) { return fraclap::cli::run(argc, argv, std::cout, std::cerr); }
