#include <iostream>

#include "gridlodf_cli/commands.hpp"

int main(int argc, char** argv) { return gridlodf::cli::run(argc, argv, std::cout, std::cerr); }
