#include "heatctl/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ostream>
#include <random>
#include <thread>

#include "heatctl/error_lab.hpp"

namespace heatctl {

namespace {

struct ReferenceCase {
  DomainSpec domain;
  Vec y0;
  BallTarget target;
  double t_exit;   // T*_{y0}
  double M;        // N(0.6 T*, y0)
  double T;        // T(M, y0) = 0.6 T* up to bisection tolerance
  double eta;

  static ReferenceCase make() {
    DomainSpec d(1.0, 0.25, 0.75, 64);
    Vec y0 = Vec::Zero(64);
    y0[0] = 2.0;
    y0[1] = 0.5;
    BallTarget target(1.0);
    const double t_exit = exit_time(d, y0, target);
    const double M = solve_jp_continuous(d, y0, target, 0.6 * t_exit).norm;
    const double T =
        optimal_time_distributed(d, y0, target, M).optimal_time;
    return ReferenceCase{std::move(d), std::move(y0), target, t_exit, M, T, 0.5};
  }
};

using Clock = std::chrono::steady_clock;

class Checker {
public:
  void check(const std::string& name, double bound, double measured, bool pass) {
    details_.push_back(Verdict{name, bound, measured, pass});
    all_ &= pass;
  }
  void require(const std::string& name, bool pass) { check(name, 0, 0, pass); }
  bool all() const { return all_; }
  std::vector<Verdict> take() { return std::move(details_); }

private:
  std::vector<Verdict> details_;
  bool all_ = true;
};

double rel_err(double got, double want) {
  return std::abs(got - want) / std::max(1.0, std::abs(want));
}

// ---------------------------------------------------------------- criterion 1
CriterionResult identity_suite(const ReferenceCase& ref) {
  Checker c;
  std::mt19937_64 rng(101);
  std::normal_distribution<double> gauss(0.0, 1.0);

  const SamplingGrid grid(ref.t_exit / 16.0, 8);
  double worst_dual = 0.0, worst_pyth = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    auto random_signal = [&] {
      return TimeSignal::on_grid(grid, 1, [&](double) {
        Vec v(ref.domain.modes());
        for (int j = 0; j < v.size(); ++j) v[j] = gauss(rng);
        return v;
      });
    };
    const TimeSignal f = random_signal();
    const TimeSignal g = random_signal();
    const TimeSignal fb = block_average(f, grid);
    const TimeSignal gb = block_average(g, grid);
    const double scale = std::max({1.0, norm_sq(f), norm_sq(g)});
    worst_dual = std::max(
        {worst_dual, std::abs(inner(fb, g) - inner(f, gb)) / scale,
         std::abs(inner(fb, g) - inner(fb, gb)) / scale});
    const auto [nf, nb, nd] = pythagoras_check(f, grid);
    worst_pyth = std::max(worst_pyth, std::abs(nf - nb - nd) / std::max(1.0, nf));
  }
  c.check("duality <f_bar,g> = <f,g_bar> (rel)", 1e-12, worst_dual,
          worst_dual <= 1e-12);
  c.check("pythagoras ||f||^2 = ||f_bar||^2 + ||f - f_bar||^2 (rel)", 1e-12,
          worst_pyth, worst_pyth <= 1e-12);

  double worst_res = 0.0, worst_val = 0.0, worst_fs = 0.0, worst_sphere = 0.0;
  auto absorb = [&](const NormSolution& sol) {
    worst_res = std::max(worst_res, sol.residual);
    worst_val = std::max(worst_val, std::abs(sol.value + 0.5 * sol.norm * sol.norm) /
                                        std::max(1.0, 0.5 * sol.norm * sol.norm));
    const Vec want = -(ref.target.radius / sol.minimizer.norm()) * sol.minimizer;
    worst_fs = std::max(worst_fs, (sol.final_state - want).norm());
    worst_sphere = std::max(worst_sphere, std::abs(sol.final_state.norm() -
                                                   ref.target.radius) /
                                              ref.target.radius);
  };
  for (double frac : {0.2, 0.35, 0.5, 0.65, 0.8, 0.9})
    absorb(solve_jp_continuous(ref.domain, ref.y0, ref.target, frac * ref.t_exit));
  for (int k : {2, 3, 5, 8, 13, 21}) {
    const double horizon = 0.6 * ref.t_exit;
    absorb(solve_jp_sampled(ref.domain, ref.y0, ref.target,
                            SamplingGrid(horizon / k, k)));
  }
  c.check("euler-lagrange residual", 1e-10, worst_res, worst_res <= 1e-10);
  c.check("value law V = -N^2/2 (rel)", 1e-10, worst_val, worst_val <= 1e-10);
  c.check("final state = -r z*/||z*||", 1e-8, worst_fs, worst_fs <= 1e-8);
  c.check("||final state|| = r (rel)", 1e-8, worst_sphere, worst_sphere <= 1e-8);

  CriterionResult res{1, "identity suite (duality, pythagoras, EL, value, final state)",
                      c.all(), 0, 10.0, c.take()};
  return res;
}

// ---------------------------------------------------------------- criterion 2
CriterionResult equivalence_suite(const ReferenceCase& ref) {
  Checker c;
  std::mt19937_64 rng(202);
  std::uniform_real_distribution<double> unif(0.0, 1.0);

  double worst_tn = 0.0, worst_nt = 0.0;
  for (int i = 0; i < 20; ++i) {
    const double T = (0.2 + 0.6 * unif(rng)) * ref.t_exit;
    const double M = solve_jp_continuous(ref.domain, ref.y0, ref.target, T).norm;
    const double t_back =
        optimal_time_distributed(ref.domain, ref.y0, ref.target, M).optimal_time;
    worst_tn = std::max(worst_tn, rel_err(t_back, T));
    const double n_back = norm_value_or_zero(ref.domain, ref.y0, ref.target, t_back);
    worst_nt = std::max(worst_nt, rel_err(n_back, M));
  }
  c.check("round trip T(N(T)) = T (rel)", 1e-8, worst_tn, worst_tn <= 1e-8);
  c.check("round trip N(T(M)) = M (rel)", 1e-8, worst_nt, worst_nt <= 1e-8);

  bool decreasing = true;
  double prev = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 50; ++i) {
    const double T = (0.05 + 0.9 * i / 49.0) * ref.t_exit;
    const double n = norm_value_or_zero(ref.domain, ref.y0, ref.target, T);
    decreasing = decreasing && n < prev;
    prev = n;
  }
  c.require("N strictly decreasing on 50-point grid", decreasing);

  bool sandwich = true;
  for (int i = 0; i < 20; ++i) {
    const double T = (0.3 + 0.5 * unif(rng)) * ref.t_exit;
    const double M = solve_jp_continuous(ref.domain, ref.y0, ref.target, T).norm;
    const double delta = T / (3.0 + 9.0 * unif(rng));
    TimeSolution ts =
        optimal_time_sampled(ref.domain, ref.y0, ref.target, M, delta);
    sandwich = sandwich && *ts.norm_at_optimal <= M;
    if (ts.norm_one_block_earlier)
      sandwich = sandwich && M < *ts.norm_one_block_earlier;
  }
  c.require("sandwich N_delta(T_delta) <= M < N_delta(T_delta - delta)", sandwich);

  return CriterionResult{2, "equivalence suite (round trips, monotonicity, sandwich)",
                         c.all(), 0, 30.0, c.take()};
}

// ---------------------------------------------------------------- criterion 3
CriterionResult bracket_suite(const ReferenceCase& ref, const EtaSet& witness,
                              double* delta0_out) {
  Checker c;
  auto t_gap = [&](double delta) {
    return optimal_time_sampled(ref.domain, ref.y0, ref.target, ref.M, delta)
               .optimal_time - ref.T;
  };

  // Empirical delta_0: scan downward until the whole 40-point ladder below
  // the candidate satisfies the two-sided bracket.
  double delta0 = ref.T / 3.0;
  bool found = false;
  for (int attempt = 0; attempt < 12 && !found; ++attempt, delta0 *= 0.5) {
    found = true;
    for (int i = 0; i < 40 && found; ++i) {
      const double delta = delta0 * std::pow(0.1, i / 39.0);
      try {
        const double gap = t_gap(delta);
        found = gap >= -1e-10 && gap <= 2.0 * delta + 1e-10;
      } catch (const Error&) {
        found = false;
      }
    }
    if (found) break;
  }
  c.require("empirical delta_0 found", found);
  if (delta0_out) *delta0_out = delta0;

  double worst_ratio = 0.0;
  bool bracket = found;
  for (int i = 0; i < 40 && bracket; ++i) {
    const double delta = delta0 * std::pow(0.1, i / 39.0);
    const double gap = t_gap(delta);
    bracket = gap >= -1e-10 && gap <= 2.0 * delta + 1e-10;
    worst_ratio = std::max(worst_ratio, gap / delta);
  }
  c.check("0 <= T_delta - T <= 2 delta on 40-point ladder", 2.0, worst_ratio,
          bracket);

  bool band = true;
  int band_points = 0;
  for (int k = witness.k_min; k <= witness.k_max; ++k) {
    for (double frac : {0.2, 0.5, 0.8}) {
      const double delta = witness.t_star / (k + frac * witness.eta);
      if (!witness.contains(delta)) continue;
      ++band_points;
      const double gap = t_gap(delta);
      band = band && gap > (1.0 - witness.eta) * delta && gap < delta;
    }
  }
  c.check("A-set band (1-eta) delta < T_gap < delta", 1.0,
          static_cast<double>(band_points), band && band_points >= 10);

  return CriterionResult{3, "time-gap bracket (two-sided order 1)",
                         c.all(), 0, 120.0, c.take()};
}

// ---------------------------------------------------------------- criterion 4
CriterionResult order_suite(const ReferenceCase& ref, const EtaSet& witness,
                            int threads) {
  Checker c;

  const auto ladder = dyadic_norm_gap(ref.domain, ref.y0, ref.target,
                                      witness.t_star, 4, 10);
  const OrderFit gap_fit = fit_order(ladder);
  c.check("norm gap dyadic slope in [1.8, 2.2]", 2.2, gap_fit.slope,
          gap_fit.slope >= 1.8 && gap_fit.slope <= 2.2);

  std::vector<double> deltas;
  for (int k = 4; k <= 120; ++k)
    for (double frac : {0.25, 0.5, 0.75}) {
      const double delta = witness.t_star / (k + frac * witness.eta);
      if (witness.contains(delta)) deltas.push_back(delta);
    }
  const auto rows =
      sweep(ref.domain, ref.y0, ref.target, ref.M, deltas, &witness, threads);

  std::vector<SweepRow> good;
  for (const auto& r : rows)
    if (r.note.empty()) good.push_back(r);

  const OrderFit ctrl_fit = fit_order(good, SweepField::CtrlErr);
  c.check("minimal-norm control error slope on A in [0.8, 1.2]", 1.2,
          ctrl_fit.slope, ctrl_fit.slope >= 0.8 && ctrl_fit.slope <= 1.2);

  const double lower_const =
      0.5 * std::pow(ref.domain.lambda1(), 1.5) * ref.target.radius *
      (1.0 - witness.eta);
  bool rowwise = !good.empty();
  double worst_margin = std::numeric_limits<double>::infinity();
  for (const auto& r : good) {
    rowwise = rowwise && r.ctrl_err_min_norm >= lower_const * r.delta;
    worst_margin = std::min(worst_margin,
                            r.ctrl_err_min_norm / (lower_const * r.delta));
  }
  c.check("row-wise control error >= (1/2) pi^3 (1-eta) r delta", 1.0,
          worst_margin, rowwise);

  const OrderFit fam_fit = fit_order(good, SweepField::FamilyErr);
  c.check("family error slope on A in [0.4, 0.6]", 0.6, fam_fit.slope,
          fam_fit.slope >= 0.4 && fam_fit.slope <= 0.6);

  return CriterionResult{4, "order fits (norm gap 2, control error 1, family 1/2)",
                         c.all(), 0, 300.0, c.take()};
}

// ---------------------------------------------------------------- criterion 5
CriterionResult lipschitz_suite(const ReferenceCase& ref) {
  Checker c;
  std::mt19937_64 rng(505);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);

  const double lam32r =
      std::pow(ref.domain.lambda1(), 1.5) * ref.target.radius;
  bool lower_ok = true;
  double worst = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 20; ++i) {
    double t1 = (0.1 + 0.8 * unif(rng)) * ref.t_exit;
    double t2 = (0.1 + 0.8 * unif(rng)) * ref.t_exit;
    if (t1 > t2) std::swap(t1, t2);
    if (t2 - t1 < 1e-4 * ref.t_exit) t2 = t1 + 1e-4 * ref.t_exit;
    const auto [lower, diff, slope] =
        norm_lipschitz_check(ref.domain, ref.y0, ref.target, t1, t2);
    lower_ok = lower_ok && lower <= diff + 1e-8;
    worst = std::min(worst, diff - lower);
    (void)slope;
  }
  c.check("lambda_1^{3/2} r (T2-T1) <= N(T1) - N(T2)", lam32r, worst, lower_ok);

  bool time_ok = true;
  double worst_t = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 20; ++i) {
    Vec y2 = ref.y0;
    const double eps = 1e-3 * (0.2 + unif(rng));
    for (int j = 0; j < 6; ++j) y2[j] += eps * gauss(rng);
    const auto [diff, bound] =
        time_lipschitz_check(ref.domain, ref.y0, y2, ref.target, ref.M);
    time_ok = time_ok && diff <= bound + 1e-8;
    worst_t = std::min(worst_t, bound - diff);
  }
  c.check("|T(M,y1) - T(M,y2)| <= ||y1-y2|| / (lambda_1 r)", 0.0, worst_t, time_ok);

  return CriterionResult{5, "Lipschitz suite (norm in T, time in y0)",
                         c.all(), 0, 60.0, c.take()};
}

// ---------------------------------------------------------------- criterion 6
CriterionResult family_suite(const ReferenceCase& ref, const EtaSet& witness) {
  Checker c;
  std::vector<std::pair<double, double>> beta_points;
  bool verified = true;
  int families = 0;
  for (int k = 4; k <= 120; ++k) {
    const double delta = witness.t_star / (k + 0.5 * witness.eta);
    if (!witness.contains(delta)) continue;
    try {
      // Construction verifies budget and target internally and throws on
      // violation; re-check the extremal member here.
      FamilyResult fam =
          build_optimal_family(ref.domain, ref.y0, ref.target, ref.M, delta);
      ++families;
      const auto& last = fam.members.back();
      const double norm = std::sqrt(control_norm_sq(ref.domain, last));
      const double reach = final_state(ref.domain, ref.y0, last).norm();
      verified = verified && norm <= ref.M + 1e-10 &&
                 reach <= ref.target.radius + 1e-8;
      beta_points.emplace_back(delta, fam.beta_max);
    } catch (const NumericalError&) {
      verified = false;
    } catch (const ConfigError&) {
      // off the constructible range; skipped
    }
  }
  c.check("every family member passes budget and target checks",
          static_cast<double>(families), static_cast<double>(families),
          verified && families >= 6);

  const OrderFit beta_fit = fit_order(beta_points);
  c.check("diameter lower bound beta_max slope in [0.4, 0.6]", 0.6,
          beta_fit.slope, beta_fit.slope >= 0.4 && beta_fit.slope <= 0.6);

  return CriterionResult{6, "constructive optimal-control family",
                         c.all(), 0, 120.0, c.take()};
}

// ---------------------------------------------------------------- criterion 7
CriterionResult hunt_suite(const ReferenceCase& ref) {
  Checker c;
  const auto hunted =
      quadratic_gap_hunt(ref.domain, ref.y0, ref.target, ref.M, 8, 13);
  c.check("hunt found a point for 6 consecutive k", 6.0,
          static_cast<double>(hunted.size()), hunted.size() == 6);
  if (hunted.size() == 6) {
    std::vector<double> ratios;
    for (const auto& [delta, gap] : hunted) ratios.push_back(gap / (delta * delta));
    std::vector<double> sorted = ratios;
    std::sort(sorted.begin(), sorted.end());
    const double median = sorted[sorted.size() / 2];
    bool bounded = true;
    double worst = 0.0;
    for (const auto& [delta, gap] : hunted) {
      bounded = bounded && gap <= 10.0 * median * delta * delta;
      worst = std::max(worst, gap / (median * delta * delta));
    }
    c.check("T_gap <= 10 median(T_gap/delta^2) delta^2 at every hunted point",
            10.0, worst, bounded);
  }
  return CriterionResult{7, "quadratic time-gap witness (no order-1 lower bound off A)",
                         c.all(), 0, 120.0, c.take()};
}

// ---------------------------------------------------------------- criterion 8
CriterionResult truncation_gate(const ReferenceCase& ref) {
  Checker c;
  const double T_ref = 0.6 * ref.t_exit;
  const double n64 =
      solve_jp_continuous(ref.domain, ref.y0, ref.target, T_ref).norm;
  const DomainSpec wide = ref.domain.with_modes(128);
  Vec y0_wide = Vec::Zero(128);
  y0_wide.head(ref.y0.size()) = ref.y0;
  const double n128 = solve_jp_continuous(wide, y0_wide, ref.target, T_ref).norm;
  const double rel = std::abs(n128 - n64) / n64;
  c.check("|N_128 - N_64| / N_64 < 1e-9", 1e-9, rel, rel < 1e-9);
  return CriterionResult{8, "mode-truncation gate (J = 64 vs 128)",
                         c.all(), 0, 30.0, c.take()};
}

} // namespace

bool run_acceptance(std::ostream& os, int threads, bool verbose) {
  if (threads <= 0) {
    threads = static_cast<int>(std::thread::hardware_concurrency());
    if (threads <= 0) threads = 1;
  }

  const ReferenceCase ref = ReferenceCase::make();
  EtaSet witness = build_eta_set(ref.domain, ref.y0, ref.target, ref.M,
                                 ref.eta, 3, 130);

  std::vector<CriterionResult> results;
  auto timed = [&](auto&& fn) {
    const auto start = Clock::now();
    CriterionResult res = fn();
    res.seconds = std::chrono::duration<double>(Clock::now() - start).count();
    res.pass = res.pass && res.seconds < res.budget_seconds;
    results.push_back(std::move(res));
  };

  timed([&] { return identity_suite(ref); });
  timed([&] { return equivalence_suite(ref); });
  timed([&] { return bracket_suite(ref, witness, nullptr); });
  timed([&] { return order_suite(ref, witness, threads); });
  timed([&] { return lipschitz_suite(ref); });
  timed([&] { return family_suite(ref, witness); });
  timed([&] { return hunt_suite(ref); });
  timed([&] { return truncation_gate(ref); });

  bool all = true;
  for (const auto& res : results) {
    all = all && res.pass;
    os << (res.pass ? "[PASS]" : "[FAIL]") << " criterion " << res.id << ": "
       << res.name << " (" << res.seconds << " s, budget " << res.budget_seconds
       << " s)\n";
    if (verbose || !res.pass) {
      for (const auto& v : res.details)
        os << "    " << (v.pass ? "ok   " : "FAIL ") << v.name << " (measured "
           << format_double(v.measured) << ", bound " << format_double(v.bound)
           << ")\n";
    }
  }
  os << (all ? "acceptance: PASS" : "acceptance: FAIL") << '\n';
  return all;
}

} // namespace heatctl
