#include <iostream>

#include "cli.hpp"

int main(int argc, char** argv) { return qos::cli::Run(argc, argv, std::cout, std::cerr); }
