#include <iostream>

#include "hyll/service.hpp"

int main(int argc, char** argv) { return hyll::run_cli(argc, argv, std::cin, std::cout, std::cerr); }
