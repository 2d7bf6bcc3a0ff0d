#include <iostream>

#include "hamflow/cli.hpp"

int main(int argc, char** argv) { return hamflow::run_cli(argc, argv, std::cout, std::cerr); }
