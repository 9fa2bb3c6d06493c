#include <iostream>

#include "shellflow/cli.hpp"

int main(int argc, char** argv) { return shellflow::run_command(argc, argv, std::cout, std::cerr); }
