#include <iostream>

#include "rgs_lab/commands.hpp"

int main(int argc, char** argv) { return rgs::lab::run_cli(argc, argv, std::cout, std::cerr); }
