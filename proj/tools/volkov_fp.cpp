#include <iostream>

#include "volkov/cli.hpp"

int main(int argc, char** argv) { return volkov::cli::main_entry(argc, argv, std::cout, std::cerr); }
