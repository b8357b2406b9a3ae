#include "heatctl/runner.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace heatctl {

namespace {

DomainSpec domain_from(const RunConfig& cfg) {
  return DomainSpec(cfg.L, cfg.a, cfg.b, cfg.J);
}

Vec initial_state(const RunConfig& cfg) {
  Vec y0 = Vec::Zero(cfg.J);
  for (std::size_t i = 0; i < cfg.y0.size(); ++i) y0[static_cast<int>(i)] = cfg.y0[i];
  return y0;
}

void base_meta(Report& rep, const RunConfig& cfg, const std::string& command) {
  rep.meta["command"] = command;
  rep.meta["config"] = cfg.serialize();
  rep.meta["seed"] = std::to_string(cfg.seed);
}

void solve_verdicts(Report& rep, const std::string& tag, const NormSolution& sol,
                    double r, double tol_residual) {
  rep.results[tag + ".N"] = sol.norm;
  rep.results[tag + ".V"] = sol.value;
  rep.results[tag + ".residual"] = sol.residual;
  rep.add_verdict(tag + ".euler_lagrange_residual", tol_residual, sol.residual,
                  sol.residual <= tol_residual);
  const double value_err = std::abs(sol.value + 0.5 * sol.norm * sol.norm);
  const double value_tol = 1e-10 * std::max(1.0, 0.5 * sol.norm * sol.norm);
  rep.add_verdict(tag + ".value_law_V_eq_minus_half_N_sq", value_tol, value_err,
                  value_err <= value_tol);
  const Vec want = -(r / sol.minimizer.norm()) * sol.minimizer;
  const double fs_err = (sol.final_state - want).norm();
  rep.add_verdict(tag + ".final_state_law", 1e-8, fs_err, fs_err <= 1e-8);
  const double radius_err = std::abs(sol.final_state.norm() - r) / r;
  rep.add_verdict(tag + ".final_state_on_sphere", 1e-8, radius_err,
                  radius_err <= 1e-8);
}

} // namespace

Report run_solve_norm(const RunConfig& cfg) {
  const DomainSpec d = domain_from(cfg);
  const Vec y0 = initial_state(cfg);
  const BallTarget target(cfg.r);

  Report rep;
  base_meta(rep, cfg, "solve-norm");
  if (cfg.T_list.empty() && (cfg.norm_delta <= 0.0 || cfg.norm_k_list.empty()))
    throw ConfigError("norm.T or (norm.delta, norm.k) required for solve-norm");

  for (double T : cfg.T_list) {
    std::ostringstream tag;
    tag << "continuous[T=" << format_double(T) << "]";
    solve_verdicts(rep, tag.str(), solve_jp_continuous(d, y0, target, T), cfg.r,
                   cfg.tol_residual);
  }
  if (cfg.norm_delta > 0.0) {
    for (int k : cfg.norm_k_list) {
      std::ostringstream tag;
      tag << "sampled[delta=" << format_double(cfg.norm_delta) << ",k=" << k << "]";
      solve_verdicts(rep, tag.str(),
                     solve_jp_sampled(d, y0, target, SamplingGrid(cfg.norm_delta, k)),
                     cfg.r, cfg.tol_residual);
    }
  }
  return rep;
}

Report run_solve_time(const RunConfig& cfg) {
  const DomainSpec d = domain_from(cfg);
  const Vec y0 = initial_state(cfg);
  const BallTarget target(cfg.r);

  Report rep;
  base_meta(rep, cfg, "solve-time");
  if (cfg.M_list.empty()) throw ConfigError("time.M required for solve-time");

  rep.results["exit_time"] = exit_time(d, y0, target);
  for (double M : cfg.M_list) {
    std::ostringstream tag;
    tag << "time[M=" << format_double(M) << "]";
    TimeSolution ts = optimal_time_distributed(d, y0, target, M);
    rep.results[tag.str() + ".T"] = ts.optimal_time;
    if (M > 0.0) {
      const double n_back = norm_value_or_zero(d, y0, target, ts.optimal_time);
      const double err = std::abs(n_back - M) / std::max(1.0, M);
      rep.add_verdict(tag.str() + ".round_trip_N_of_T", 1e-8, err, err <= 1e-8);
    }
    if (cfg.time_delta > 0.0 && M > 0.0) {
      TimeSolution st = optimal_time_sampled(d, y0, target, M, cfg.time_delta);
      rep.results[tag.str() + ".T_delta"] = st.optimal_time;
      rep.results[tag.str() + ".k"] = st.blocks;
      rep.add_verdict(tag.str() + ".sandwich_lower", M, *st.norm_at_optimal,
                      *st.norm_at_optimal <= M);
      if (st.norm_one_block_earlier)
        rep.add_verdict(tag.str() + ".sandwich_upper", M,
                        *st.norm_one_block_earlier, M < *st.norm_one_block_earlier);
      if (!st.warning.empty()) rep.meta[tag.str() + ".warning"] = st.warning;
      rep.add_verdict(tag.str() + ".time_dominance", st.optimal_time,
                      ts.optimal_time, ts.optimal_time <= st.optimal_time);
    }
  }
  return rep;
}

Report run_error_lab(const RunConfig& cfg) {
  const DomainSpec d = domain_from(cfg);
  const Vec y0 = initial_state(cfg);
  const BallTarget target(cfg.r);

  Report rep;
  base_meta(rep, cfg, "sweep");

  const double t_exit = exit_time(d, y0, target);
  double M = cfg.sweep_M;
  if (M <= 0.0)
    M = solve_jp_continuous(d, y0, target, cfg.sweep_M_frac * t_exit).norm;
  rep.results["exit_time"] = t_exit;
  rep.results["M"] = M;

  const EtaSet witness =
      build_eta_set(d, y0, target, M, cfg.eta, cfg.k_min, cfg.k_max);
  rep.results["T"] = witness.t_star;
  rep.results["A_cutoff"] = witness.cutoff;

  std::vector<double> deltas = cfg.deltas;
  if (deltas.empty()) {
    // Three points inside every witness interval plus one in each gap.
    for (int k = cfg.k_min; k <= cfg.k_max; ++k) {
      for (double frac : {0.25, 0.5, 0.75})
        deltas.push_back(witness.t_star / (k + frac * cfg.eta));
      deltas.push_back(witness.t_star / (k + cfg.eta + 0.5 * (1.0 - cfg.eta)));
    }
    std::sort(deltas.begin(), deltas.end(), std::greater<>());
  }

  std::vector<SweepRow> rows =
      sweep(d, y0, target, M, deltas, &witness, cfg.threads);
  rep.rows = rows;

  auto record_fit = [&](const std::string& name, const OrderFit& fit) {
    rep.fits.push_back(
        FitRecord{name, fit.slope, fit.intercept, fit.r_squared, fit.points_used});
    return fit;
  };

  std::vector<SweepRow> a_rows;
  for (const auto& r : rows)
    if (r.in_A && r.note.empty()) a_rows.push_back(r);

  const OrderFit ctrl_fit = record_fit("ctrl_err_min_norm[A]",
                                       fit_order(a_rows, SweepField::CtrlErr));
  rep.add_verdict("order.ctrl_err_A_slope_in_[0.8,1.2]", 1.2, ctrl_fit.slope,
                  ctrl_fit.slope >= 0.8 && ctrl_fit.slope <= 1.2);

  const OrderFit fam_fit = record_fit("family_err[A]",
                                      fit_order(a_rows, SweepField::FamilyErr));
  rep.add_verdict("order.family_err_A_slope_in_[0.4,0.6]", 0.6, fam_fit.slope,
                  fam_fit.slope >= 0.4 && fam_fit.slope <= 0.6);

  const auto ladder =
      dyadic_norm_gap(d, y0, target, witness.t_star, 4, cfg.dyadic_levels);
  const OrderFit gap_fit = record_fit("norm_gap[dyadic]", fit_order(ladder));
  rep.add_verdict("order.norm_gap_slope_in_[1.8,2.2]", 2.2, gap_fit.slope,
                  gap_fit.slope >= 1.8 && gap_fit.slope <= 2.2);

  bool bracket_ok = true, a_band_ok = true, ctrl_lower_ok = true, nonneg_ok = true;
  double worst_bracket = 0.0;
  const double ctrl_const = 0.5 * std::pow(d.lambda1(), 1.5) * cfg.r * (1.0 - cfg.eta);
  for (const auto& r : rows) {
    if (!r.note.empty()) continue;
    nonneg_ok = nonneg_ok && r.T_gap >= -1e-10 && r.norm_gap >= -1e-10;
    bracket_ok = bracket_ok && r.T_gap >= -1e-10 && r.T_gap <= 2.0 * r.delta + 1e-10;
    worst_bracket = std::max(worst_bracket, r.T_gap / r.delta);
    if (r.in_A) {
      a_band_ok = a_band_ok && r.T_gap > (1.0 - cfg.eta) * r.delta &&
                  r.T_gap < r.delta;
      ctrl_lower_ok = ctrl_lower_ok && r.ctrl_err_min_norm >= ctrl_const * r.delta;
    }
  }
  rep.add_verdict("bracket.T_gap_in_[0,2delta]", 2.0, worst_bracket, bracket_ok);
  rep.add_verdict("bracket.A_band_(1-eta)delta_to_delta", 1.0, 0.0, a_band_ok);
  rep.add_verdict("ctrl_err.row_lower_bound_half_lambda32_r_(1-eta)delta",
                  ctrl_const, 0.0, ctrl_lower_ok);
  rep.add_verdict("gaps.nonnegative", 0.0, 0.0, nonneg_ok);

  const auto hunted =
      quadratic_gap_hunt(d, y0, target, M, cfg.hunt_k_min, cfg.hunt_k_max);
  rep.results["hunt.points"] = static_cast<double>(hunted.size());
  if (!hunted.empty()) {
    std::vector<double> ratios;
    for (const auto& [delta, gap] : hunted) ratios.push_back(gap / (delta * delta));
    std::vector<double> sorted = ratios;
    std::sort(sorted.begin(), sorted.end());
    const double median = sorted[sorted.size() / 2];
    rep.results["hunt.median_gap_over_delta_sq"] = median;
    bool bounded = true;
    for (std::size_t i = 0; i < hunted.size(); ++i)
      bounded = bounded && hunted[i].second <= 10.0 * median * hunted[i].first *
                                                   hunted[i].first;
    rep.add_verdict("hunt.T_gap_quadratic_in_delta", 10.0 * median, median, bounded);
  }
  return rep;
}

} // namespace heatctl
