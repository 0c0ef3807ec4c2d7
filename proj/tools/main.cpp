#include <iostream>

#include "quasisim/cli.hpp"

int main(int argc, char** argv) {
  return quasisim::cli::run(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}
