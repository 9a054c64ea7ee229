#include <iostream>

#include "iscat/cli.hpp"

int main(int argc, char** argv) { return iscat::run_cli(argc, argv, std::cout, std::cerr); }
