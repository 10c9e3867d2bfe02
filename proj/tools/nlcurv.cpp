#include <iostream>

#include "nlcurv/cli.hpp"

int main(int argc, char** argv) { return nlcurv::cli_main(argc, argv, std::cout, std::cerr); }
