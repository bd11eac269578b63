#include <iostream>

#include "tablescope/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return tablescope::cli::run(args, std::cout, std::cerr);
}
