#include <iostream>

#include "alc/harness/cli.hpp"

int main(int argc, char** argv) { return alc::run_cli(argc, argv, std::cout, std::cerr); }
