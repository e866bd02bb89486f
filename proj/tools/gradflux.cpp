#include "gradflux/cli.hpp"

#include <iostream>

int main(int argc, char** argv) {
  return gradflux::run(argc, argv, std::cout, std::cerr);
}
