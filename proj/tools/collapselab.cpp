#include <iostream>

#include "collapselab/cli.hpp"

int main(int argc, char** argv) {
  return collapselab::cli::run(argc, argv, std::cout, std::cerr);
}
