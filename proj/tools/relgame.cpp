#include <iostream>

#include "relgame/cli.hpp"

int main(int argc, char** argv) { return relgame::cli::run(argc, argv, std::cout, std::cerr); }
