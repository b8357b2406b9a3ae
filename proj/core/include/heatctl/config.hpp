#ifndef HEATCTL_CONFIG_HPP
#define HEATCTL_CONFIG_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "heatctl/errors.hpp"

namespace heatctl {

/// Run configuration, parsed from flat "section.key = value" text.
/// Unknown keys and malformed values fail with the offending key in the
/// message.  Environment variables are never consulted.
struct RunConfig {
  // domain
  double L = 1.0;
  double a = 0.25;
  double b = 0.75;
  int J = 64;

  // problem
  std::vector<double> y0 = {2.0, 0.5};
  double r = 1.0;

  // solve-norm inputs
  std::vector<double> T_list;
  double norm_delta = 0.0; // with norm_k: sampled norm solves
  std::vector<int> norm_k_list;

  // solve-time inputs
  std::vector<double> M_list;
  double time_delta = 0.0; // > 0 enables the sampled time problem

  // sweep inputs
  double sweep_M = 0.0;       // explicit budget, or
  double sweep_M_frac = 0.6;  // M = N(frac * exit_time) when sweep_M == 0
  std::vector<double> deltas; // explicit ladder; generated from A when empty
  int dyadic_levels = 10;
  double eta = 0.5;
  int k_min = 3;
  int k_max = 40;
  int hunt_k_min = 8;
  int hunt_k_max = 13;

  // tolerances
  double tol_bisection = 1e-12;
  double tol_residual = 1e-10;
  int quad_nodes = 8;

  // execution
  std::string out_dir = ".";
  std::uint64_t seed = 1;
  int threads = 1;

  static RunConfig parse(const std::string& text);
  static RunConfig parse_file(const std::string& path);

  /// Round-trippable text form: parse(serialize(c)) is semantically c.
  std::string serialize() const;

  /// Cross-field precondition checks (interval ordering, positivity, ...).
  void validate() const;
};

} // namespace heatctl

#endif
