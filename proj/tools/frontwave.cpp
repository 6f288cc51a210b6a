#include <iostream>

#include "frontwave/cli.hpp"

int main(int argc, char** argv) { return frontwave::cli::run(argc, argv, std::cout, std::cerr); }
