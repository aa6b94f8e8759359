#include <iostream>
#include <string>
#include <vector>

#include "seerisk/commands.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return seerisk::cli::run(args, std::cout, std::cerr);
}
