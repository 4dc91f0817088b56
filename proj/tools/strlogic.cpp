#include <iostream>

#include "strlogic/cli.hpp"

int main(int argc, char** argv) { return strlogic::cli::run(argc, argv, std::cout, std::cerr); }
