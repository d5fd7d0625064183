#include <iostream>

#include "nbmeans/cli.hpp"

int main(int argc, char** argv) { return nbmeans::run_cli(argc, argv, std::cout, std::cerr); }
