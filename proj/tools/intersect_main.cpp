#include <iostream>

#include "conics/cli.hpp"

int main(int argc, char** argv) { return conics::cli::run(argc, argv, std::cout, std::cerr); }
