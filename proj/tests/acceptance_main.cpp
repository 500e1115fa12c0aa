// SPDX-License-Identifier: Apache-2.0
//
// Acceptance harness: runs every criterion at its stated tolerance and
// prints one pass/fail line per criterion.  Exit code 0 only if all pass.
#include <cstdlib>
#include <iostream>

#include "mpa/acceptance.hpp"

int main(int argc, char** argv) {
  std::uint64_t seed = 20240817;
  if (argc > 1) seed = std::strtoull(argv[1], nullptr, 10);
  std::cout << "acceptance suite, seed " << seed << "\n";
  auto results = mpa::acceptance::run_all(seed);
  int failed = mpa::acceptance::print_report(std::cout, results);
  return failed == 0 ? 0 : 3;
}
