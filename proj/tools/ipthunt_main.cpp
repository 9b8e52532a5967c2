#include <iostream>

#include "ipthunt/report/cli.hpp"

int main(int argc, char** argv) { return ipthunt::cli_main(argc, argv, std::cout, std::cerr); }
