#include <iostream>

#include "liftkit/cli.hpp"

int main(int argc, char** argv) { return liftkit::cli::run(argc, argv, std::cout, std::cerr); }
