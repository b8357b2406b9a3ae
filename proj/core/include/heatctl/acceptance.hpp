#ifndef HEATCTL_ACCEPTANCE_HPP
#define HEATCTL_ACCEPTANCE_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "heatctl/report.hpp"

namespace heatctl {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  double seconds = 0.0;
  double budget_seconds = 0.0;
  std::vector<Verdict> details;
};

/// Runs the eight-part verification suite on the reference configuration
/// (L = 1, omega = (0.25, 0.75), J = 64, y0 = 2 e1 + 0.5 e2, r = 1,
/// M = N(0.6 T*), eta = 0.5), printing one pass/fail line per criterion.
/// Returns true iff every criterion passes within its runtime budget.
bool run_acceptance(std::ostream& os, int threads = 0, bool verbose = false);

} // namespace heatctl

#endif
