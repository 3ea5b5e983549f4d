#include <iostream>

#include "cli.hpp"

int main(int argc, char** argv) { return mopctl::run(argc, argv, std::cout, std::cerr); }
