#include <iostream>

#include "amo_app/cli.hpp"

int main(int argc, char** argv) {
  return amo::app::run_cli(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
