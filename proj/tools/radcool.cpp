#include <iostream>

#include "radcool/cli.hpp"

int main(int argc, char** argv) {
  return radcool::cli_main({argv + 1, argv + argc}, std::cout, std::cerr);
}
