#ifndef HEATCTL_TIME_OPTIMAL_HPP
#define HEATCTL_TIME_OPTIMAL_HPP

#include <optional>
#include <string>

#include "heatctl/min_norm.hpp"

namespace heatctl {

enum class ControlKind { Distributed, Sampled };

struct TimeSolution {
  double optimal_time = 0.0;
  double budget = 0.0; // M
  ControlKind kind = ControlKind::Distributed;
  std::optional<std::variant<AdjointControl, SampledControl>> control;
  double control_norm = 0.0; // N(T) resp. N_delta(T_delta); 0 when M = 0

  // sampled kind: optimal_time = blocks * delta exactly
  double delta = 0.0;
  int blocks = 0;
  // Sandwich margins N_delta(T_delta) <= M < N_delta(T_delta - delta),
  // reported when both horizons admit k >= 2.
  std::optional<double> norm_at_optimal;
  std::optional<double> norm_one_block_earlier;
  std::string warning;
};

/// Inverts the strictly decreasing map T -> N(T, y0) by bisection:
/// returns T with N(T, y0) = M to abs_tol on T.  M = 0 returns the exit
/// time with no control.
TimeSolution optimal_time_distributed(const DomainSpec& d, const Vec& y0,
                                      const BallTarget& target, double M,
                                      double abs_tol = 1e-10);

/// Smallest k >= 2 with N_delta(k delta, y0) <= M; the returned control is
/// the minimal-norm control of the sampled norm problem at that horizon.
TimeSolution optimal_time_sampled(const DomainSpec& d, const Vec& y0,
                                  const BallTarget& target, double M,
                                  double delta);

/// (|T(M,y1) - T(M,y2)|, ||y1 - y2|| / (lambda_1 r)); the first should not
/// exceed the second.
std::pair<double, double> time_lipschitz_check(const DomainSpec& d, const Vec& y1,
                                               const Vec& y2, const BallTarget& target,
                                               double M);

/// (lambda_1^{3/2} r (T2 - T1), N(T1) - N(T2), empirical slope
/// (N(T1)-N(T2))/(T2-T1)); the first should not exceed the second.
std::tuple<double, double, double>
norm_lipschitz_check(const DomainSpec& d, const Vec& y0, const BallTarget& target,
                     double T1, double T2);

/// N(T, y0) extended by 0 past the exit time; used by the bisection and the
/// sampled-time search.
double norm_value_or_zero(const DomainSpec& d, const Vec& y0,
                          const BallTarget& target, double T);

/// N_delta(k delta, y0) extended by 0 once the horizon passes the exit time.
double sampled_norm_value_or_zero(const DomainSpec& d, const Vec& y0,
                                  const BallTarget& target, const SamplingGrid& grid);

} // namespace heatctl

#endif
