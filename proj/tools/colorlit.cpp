#include <iostream>
#include <string>
#include <vector>

#include "colorlit/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return colorlit::cli::run(args, std::cout, std::cerr);
}
