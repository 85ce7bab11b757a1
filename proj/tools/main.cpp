#include <iostream>

#include "splitform/cli.hpp"

int main(int argc, char** argv) {
  return splitform::run_cli(argc, argv, std::cout, std::cerr);
}
