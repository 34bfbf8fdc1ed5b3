#include <iostream>

#include "cli.hpp"

int main(int argc, char** argv) { return critsob::cli::run(argc, argv, std::cout, std::cerr); }
