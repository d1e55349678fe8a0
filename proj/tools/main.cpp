#include <iostream>

#include "surfgrow/cli.hpp"

int main(int argc, char** argv) {
  return surfgrow::run_cli(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}
