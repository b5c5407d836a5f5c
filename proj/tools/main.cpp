#include <iostream>

#include "conedual/cli.hpp"

int main(int argc, char** argv) { return conedual::run_cli(argc, argv, std::cout, std::cerr); }
