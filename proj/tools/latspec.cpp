#include <iostream>

#include "latspec/cli.hpp"

int main(int argc, char** argv) { return latspec::cli::main_entry(argc, argv, std::cout, std::cerr); }
