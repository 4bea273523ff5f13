#include <iostream>
#include <string>
#include <vector>

#include "fockbench/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return fockbench::run_cli(args, std::cout, std::cerr);
}
