#include <iostream>

#include "lomd/cli/commands.hpp"

int main(int argc, char** argv) { return lomd::cli::main_entry(argc, argv, std::cout, std::cerr); }
