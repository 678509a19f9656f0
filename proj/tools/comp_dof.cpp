#include "comp_dof/cli.hpp"

#include <iostream>

int main(int argc, char** argv) {
  return comp_dof::run_cli(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}
