#include <iostream>

#include "ncsoliton/cli.hpp"

int main(int argc, char** argv) { return ncsoliton::cli::run(argc, argv, std::cout, std::cerr); }
