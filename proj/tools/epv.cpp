#include <iostream>

#include "epv/cli.hpp"

int main(int argc, char** argv) { return epv::run_cli(argc, argv, std::cout, std::cerr); }
