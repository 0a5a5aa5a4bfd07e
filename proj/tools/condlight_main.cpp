#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include "condlight/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  try {
    return condlight::cli::run(args, std::cout, std::cerr);
  } catch (const std::exception& e) {
    std::cerr << condlight::cli::kToolName << ": " << e.what() << '\n';
    return 1;
  }
}
