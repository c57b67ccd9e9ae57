#include <iostream>

#include "susy/cli.hpp"

int main(int argc, char** argv) { return susy::cli::main_entry(argc, argv, std::cout, std::cerr); }
