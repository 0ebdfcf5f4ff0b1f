#include <iostream>
#include <string>
#include <vector>

#include "fcnd/cli.hpp"

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv + 1, argv + argc);
  return fcnd::run_cli(args, std::cout, std::cerr);
}
