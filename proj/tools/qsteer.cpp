#include <iostream>

#include "qsteer/cli.hpp"

int main(int argc, char** argv) { return qsteer::cli::main(argc, argv, std::cout, std::cerr); }
