#include <iostream>

#include "covq/cli.hpp"

int main(int argc, char** argv) { return covq::cli::run(argc, argv, std::cout, std::cerr); }
