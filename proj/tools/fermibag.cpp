#include <iostream>

#include "fermibag/cli.hpp"

int main(int argc, char** argv) {
  return fermibag::cli::run(argc, argv, std::cout, std::cerr);
}
