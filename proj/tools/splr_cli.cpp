#include <iostream>

#include "splr/cli.hpp"

int main(int argc, char** argv) {
  return splr::cli::run(argc, argv, std::cout, std::cerr);
}
