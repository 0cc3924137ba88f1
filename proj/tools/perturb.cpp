#include <unistd.h>

#include <iostream>

#include "cli/commands.hpp"

int main(int argc, char** argv) {
  return perturb::cli::run(argc, argv, std::cout, std::cerr, isatty(STDOUT_FILENO) != 0);
}
