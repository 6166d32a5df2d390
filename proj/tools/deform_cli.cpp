#include <iostream>

#include "deform/cli.hpp"

int main(int argc, char** argv) { return deform::cli::run(argc, argv, std::cout, std::cerr); }
