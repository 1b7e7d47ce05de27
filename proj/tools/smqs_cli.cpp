#include <iostream>

#include "smqs/harness/cli.hpp"

int main(int argc, char** argv) { return smqs::harness::cli_main(argc, argv, std::cout, std::cerr); }
