#include <iostream>

#include "qd/cli.hpp"

int main(int argc, char **argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return qd::run_cli(args, std::cout, std::cerr);
}
