#include <iostream>

#include "dispatch.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return nlslab::cli::dispatch(args, std::cout, std::cerr);
}
