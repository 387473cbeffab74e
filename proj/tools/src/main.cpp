#include <iostream>

#include "nsvcli/app.hpp"

int main(int argc, char** argv) {
  return nsvcli::run_cli(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
