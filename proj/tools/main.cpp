#include <iostream>

#include "sudler/cli.hpp"

int main(int argc, char** argv) { return sudler::cli::run(argc, argv, std::cout, std::cerr); }
