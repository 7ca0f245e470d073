#include <iostream>

#include "coldgas/cli/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return coldgas::cli::run(args, std::cout, std::cerr);
}
