#ifndef HEATCTL_RUNNER_HPP
#define HEATCTL_RUNNER_HPP

#include "heatctl/config.hpp"
#include "heatctl/report.hpp"

namespace heatctl {

/// Fixed-horizon norm solves (continuous for each norm.T, sampled for each
/// norm.k when norm.delta is set), with value/final-state verdicts.
Report run_solve_norm(const RunConfig& cfg);

/// Time-optimal solves per budget time.M; when time.delta is set, the
/// sampled problem runs alongside with sandwich margins.
Report run_solve_time(const RunConfig& cfg);

/// Full experiment harness: witness set, delta sweep, dyadic norm-gap
/// ladder, slope fits, quadratic gap hunt, and the order verdicts.
Report run_error_lab(const RunConfig& cfg);

} // namespace heatctl

#endif
