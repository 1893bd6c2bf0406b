#include <iostream>
#include <string>
#include <vector>

#include "treelip/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return treelip::cli::run(args, std::cout, std::cerr);
}
