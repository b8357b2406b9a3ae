// Runs the verification suite against the reference configuration and
// prints one pass/fail line per criterion.
#include <cstring>
#include <iostream>

#include "heatctl/acceptance.hpp"

int main(int argc, char** argv) {
  bool verbose = false;
  int threads = 0;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--verbose") == 0) verbose = true;
    if (std::strcmp(argv[i], "--threads") == 0 && i + 1 < argc)
      threads = std::atoi(argv[++i]);
  }
  const bool ok = heatctl::run_acceptance(std::cout, threads, verbose);
  return ok ? 0 : 1;
}
