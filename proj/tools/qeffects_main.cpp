#include <iostream>
#include <string>
#include <vector>

#include "qeffects/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return qeffects::run_cli(args, std::cout, std::cerr);
}
