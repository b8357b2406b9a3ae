#include "heatctl/time_optimal.hpp"

#include <cmath>

namespace heatctl {

double norm_value_or_zero(const DomainSpec& d, const Vec& y0,
                          const BallTarget& target, double T) {
  const Vec q = semigroup_apply(d, T, y0);
  if (q.norm() <= target.radius) return 0.0;
  const Mat W = continuous_gramian(d, T).matrix;
  const SecularResult sec = secular_solve(W, q, target.radius);
  return std::sqrt(sec.z.dot(W * sec.z));
}

double sampled_norm_value_or_zero(const DomainSpec& d, const Vec& y0,
                                  const BallTarget& target,
                                  const SamplingGrid& grid) {
  const Vec q = semigroup_apply(d, grid.horizon(), y0);
  if (q.norm() <= target.radius) return 0.0;
  const Mat W = sampled_gramian(d, grid).matrix;
  const SecularResult sec = secular_solve(W, q, target.radius);
  return std::sqrt(sec.z.dot(W * sec.z));
}

TimeSolution optimal_time_distributed(const DomainSpec& d, const Vec& y0,
                                      const BallTarget& target, double M,
                                      double abs_tol) {
  if (M < 0.0) throw ConfigError("budget M must be nonnegative");
  const double t_star = exit_time(d, y0, target);

  TimeSolution out;
  out.budget = M;
  out.kind = ControlKind::Distributed;
  if (M == 0.0) {
    out.optimal_time = t_star;
    return out;
  }

  auto n_of = [&](double T) { return norm_value_or_zero(d, y0, target, T); };

  // Bracket: N -> infinity as T -> 0+ and N -> 0 as T -> T*-.
  double lo = 0.5 * t_star;
  int guard = 0;
  while (n_of(lo) <= M) {
    lo *= 0.5;
    if (++guard > 200)
      throw NumericalError("optimal_time_distributed: lower bracket failed");
  }
  double hi = t_star * (1.0 - 1e-9);
  guard = 0;
  while (n_of(hi) > M) {
    hi = t_star - 0.125 * (t_star - hi);
    if (++guard > 200)
      throw NumericalError("optimal_time_distributed: upper bracket failed");
  }
  while (hi - lo > abs_tol) {
    const double mid = 0.5 * (lo + hi);
    (n_of(mid) > M ? lo : hi) = mid;
  }
  const double T = 0.5 * (lo + hi);

  NormSolution sol = solve_jp_continuous(d, y0, target, T);
  out.optimal_time = T;
  out.control = sol.control;
  out.control_norm = sol.norm;
  return out;
}

TimeSolution optimal_time_sampled(const DomainSpec& d, const Vec& y0,
                                  const BallTarget& target, double M,
                                  double delta) {
  if (!(M > 0.0)) throw ConfigError("sampled time problem requires M > 0");
  if (!(delta > 0.0)) throw ConfigError("sampling period must be positive");
  const double t_star = exit_time(d, y0, target);
  if (!(delta < 0.5 * t_star))
    throw ConfigError("sampling too coarse: no k >= 2 fits below the exit time");

  // N_delta(k delta) is nonincreasing in k, so the smallest admissible k is
  // found by binary search.  Horizons at or past the exit time count as
  // admissible (free dynamics suffices there).
  auto admissible = [&](int k) {
    if (k * delta >= t_star) return true;
    if (k < 2) return false;
    return sampled_norm_value_or_zero(d, y0, target, SamplingGrid(delta, k)) <= M;
  };

  int hi = static_cast<int>(std::ceil(t_star / delta));
  while (!admissible(hi)) ++hi;
  int lo = 1; // k = 1 is never accepted
  while (hi - lo > 1) {
    const int mid = lo + (hi - lo) / 2;
    (admissible(mid) ? hi : lo) = mid;
  }
  const int k = hi;
  if (k * delta >= t_star)
    throw ConfigError("sampling too coarse: no admissible horizon below the exit time");

  const SamplingGrid grid(delta, k);
  NormSolution sol = solve_jp_sampled(d, y0, target, grid);

  TimeSolution out;
  out.budget = M;
  out.kind = ControlKind::Sampled;
  out.delta = delta;
  out.blocks = k;
  out.optimal_time = k * delta;
  out.control = sol.control;
  out.control_norm = sol.norm;
  out.norm_at_optimal = sol.norm;
  if (k >= 3) {
    out.norm_one_block_earlier =
        sampled_norm_value_or_zero(d, y0, target, SamplingGrid(delta, k - 1));
    if (!(sol.norm <= M && M < *out.norm_one_block_earlier))
      throw NumericalError("sampled time search violated the optimality sandwich");
  } else {
    out.warning = "k = 2: one-block horizon is outside P_{T*}, sandwich untestable";
  }
  return out;
}

std::pair<double, double> time_lipschitz_check(const DomainSpec& d, const Vec& y1,
                                               const Vec& y2, const BallTarget& target,
                                               double M) {
  const double t1 = optimal_time_distributed(d, y1, target, M).optimal_time;
  const double t2 = optimal_time_distributed(d, y2, target, M).optimal_time;
  const double bound = (y1 - y2).norm() / (d.lambda1() * target.radius);
  return {std::abs(t1 - t2), bound};
}

std::tuple<double, double, double>
norm_lipschitz_check(const DomainSpec& d, const Vec& y0, const BallTarget& target,
                     double T1, double T2) {
  if (!(0.0 < T1 && T1 < T2)) throw ConfigError("norm Lipschitz check needs 0 < T1 < T2");
  const double n1 = solve_jp_continuous(d, y0, target, T1).norm;
  const double n2 = solve_jp_continuous(d, y0, target, T2).norm;
  const double lower = std::pow(d.lambda1(), 1.5) * target.radius * (T2 - T1);
  const double diff = n1 - n2;
  return {lower, diff, diff / (T2 - T1)};
}

} // namespace heatctl
