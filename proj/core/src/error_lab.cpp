#include "heatctl/error_lab.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

namespace heatctl {

namespace {

void parallel_for(int n, int threads, const std::function<void(int)>& body) {
  if (threads <= 1 || n <= 1) {
    for (int i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) body(i);
  };
  std::vector<std::thread> pool;
  const int count = std::min(threads, n);
  pool.reserve(count);
  for (int t = 0; t < count; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
}

double margin_bound(const DomainSpec& d, const BallTarget& target, double eta,
                    double delta) {
  return 0.5 * std::pow(d.lambda1(), 1.5) * target.radius * (1.0 - eta) * delta;
}

} // namespace

bool EtaSet::contains(double delta) const {
  if (!(delta > 0.0) || delta >= cutoff) return false;
  // delta in (T*/(k+eta), T*/k) for the unique candidate k = floor(T*/delta).
  const double k = std::floor(t_star / delta);
  if (k < 1.0) return false;
  const double frac = t_star / delta - k;
  return frac > 0.0 && frac < eta;
}

double EtaSet::measure_below(double h) const {
  const double top = std::min(h, cutoff);
  if (!(top > 0.0)) return 0.0;
  double acc = 0.0;
  const long k_start = std::max<long>(1, static_cast<long>(std::floor(t_star / top)));
  const long k_cap = 2'000'000;
  for (long k = k_start; k <= k_cap; ++k) {
    const double lo = t_star / (k + eta), hi = t_star / k;
    const double a = std::max(0.0, std::min(hi, top) - lo);
    if (std::min(hi, top) > lo) acc += a;
    if (hi < 1e-12 * top) break;
    if (k == k_cap) acc += t_star * std::log1p(eta / k_cap); // integral tail
  }
  return acc;
}

EtaSet build_eta_set(const DomainSpec& d, const Vec& y0, const BallTarget& target,
                     double M, double eta, int k_min, int k_max) {
  if (!(eta > 0.0 && eta < 1.0)) throw ConfigError("sweep.eta must lie in (0, 1)");
  if (k_min < 1 || k_max < k_min) throw ConfigError("sweep.k_range is empty");
  EtaSet set;
  set.M = M;
  set.eta = eta;
  set.k_min = k_min;
  set.k_max = k_max;
  set.t_star = optimal_time_distributed(d, y0, target, M).optimal_time;
  for (int k = k_min; k <= k_max; ++k)
    set.intervals.emplace_back(set.t_star / (k + eta), set.t_star / k);

  // Empirical cutoff: largest interval endpoint below which the margin
  // inequality holds at every sampled point of the candidate set.
  const double fractions[] = {0.1, 0.5, 0.9};
  auto interval_passes = [&](int k) {
    for (double f : fractions) {
      const double delta = set.t_star / (k + f * eta);
      TimeSolution ts;
      try {
        ts = optimal_time_sampled(d, y0, target, M, delta);
      } catch (const Error&) {
        return false;
      }
      if (ts.blocks != k + 1) return false;
      if (!(M >= ts.control_norm + margin_bound(d, target, eta, delta)))
        return false;
    }
    return true;
  };
  set.cutoff = 0.0;
  for (int k = k_max; k >= k_min; --k) {
    if (!interval_passes(k)) break;
    set.cutoff = set.t_star / k;
  }
  return set;
}

namespace {

SweepRow make_row(const DomainSpec& d, const Vec& y0, const BallTarget& target,
                  double M, double T, const AdjointControl& u_star, double delta,
                  const EtaSet* witness) {
  SweepRow row;
  row.delta = delta;
  row.in_A = witness != nullptr && witness->contains(delta);
  try {
    TimeSolution ts = optimal_time_sampled(d, y0, target, M, delta);
    row.k = ts.blocks;
    row.T_gap = ts.optimal_time - T;
    const auto& ctrl = std::get<SampledControl>(*ts.control);
    row.ctrl_err_min_norm = control_error(d, ctrl, u_star);
    const double n_cont = norm_value_or_zero(d, y0, target, ts.optimal_time);
    row.norm_gap = ts.control_norm - n_cont;
    if (row.in_A) {
      try {
        row.family_err = family_vs_distributed_error(d, y0, target, M, delta);
      } catch (const Error& e) {
        row.note = std::string("family: ") + e.what();
      }
    }
  } catch (const Error& e) {
    row.note = e.what();
  }
  return row;
}

} // namespace

std::vector<SweepRow> sweep(const DomainSpec& d, const Vec& y0,
                            const BallTarget& target, double M,
                            const std::vector<double>& deltas,
                            const EtaSet* witness, int threads) {
  TimeSolution dist = optimal_time_distributed(d, y0, target, M);
  if (!dist.control)
    throw ConfigError("sweep requires M > 0");
  const AdjointControl u_star = std::get<AdjointControl>(*dist.control);
  const double T = dist.optimal_time;

  std::vector<SweepRow> rows(deltas.size());
  parallel_for(static_cast<int>(deltas.size()), threads, [&](int i) {
    rows[i] = make_row(d, y0, target, M, T, u_star, deltas[i], witness);
  });
  return rows;
}

OrderFit fit_order(const std::vector<std::pair<double, double>>& points) {
  OrderFit fit;
  std::vector<std::pair<double, double>> logs;
  for (const auto& [x, y] : points) {
    if (x > 0.0 && y > 0.0)
      logs.emplace_back(std::log(x), std::log(y));
    else
      ++fit.points_dropped;
  }
  fit.points_used = static_cast<int>(logs.size());
  if (fit.points_used < 2) return fit;

  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  for (const auto& [x, y] : logs) {
    sx += x; sy += y; sxx += x * x; sxy += x * y; syy += y * y;
  }
  const double n = static_cast<double>(fit.points_used);
  const double vxx = sxx - sx * sx / n;
  const double vxy = sxy - sx * sy / n;
  const double vyy = syy - sy * sy / n;
  fit.slope = vxy / vxx;
  fit.intercept = (sy - fit.slope * sx) / n;
  fit.r_squared = (vyy > 0.0) ? (vxy * vxy) / (vxx * vyy) : 1.0;
  return fit;
}

OrderFit fit_order(const std::vector<SweepRow>& rows, SweepField field) {
  std::vector<std::pair<double, double>> pts;
  for (const auto& r : rows) {
    if (!r.note.empty() && field != SweepField::FamilyErr) continue;
    switch (field) {
      case SweepField::TGap: pts.emplace_back(r.delta, r.T_gap); break;
      case SweepField::CtrlErr: pts.emplace_back(r.delta, r.ctrl_err_min_norm); break;
      case SweepField::NormGap: pts.emplace_back(r.delta, r.norm_gap); break;
      case SweepField::FamilyErr:
        if (r.family_err) pts.emplace_back(r.delta, *r.family_err);
        break;
    }
  }
  return fit_order(pts);
}

FamilyResult build_optimal_family(const DomainSpec& d, const Vec& y0,
                                  const BallTarget& target, double M,
                                  double delta) {
  const double T = optimal_time_distributed(d, y0, target, M).optimal_time;
  TimeSolution ts = optimal_time_sampled(d, y0, target, M, delta);
  const SampledControl u_star = std::get<SampledControl>(*ts.control);
  const double m_delta = ts.control_norm;
  if (!(M > m_delta))
    throw ConfigError("family construction requires M > N_delta(T_delta) strictly");
  if (!(delta < T))
    throw ConfigError("family construction: no sampling block inside (0, T)");

  const SamplingGrid grid = u_star.grid;
  const int pivot = 1; // first block (0, delta] lies inside (0, T)
  const Vec& w_pivot = u_star.blocks[pivot - 1];

  // Orthogonalize a seed eigenmode against u*_delta in the window metric,
  // normalize to unit L2 norm, and flip the sign so the final-state inner
  // product is nonpositive.
  const Vec resp_star = response(d, u_star);
  Vec w_hat;
  bool built = false;
  for (int seed = 0; seed < d.modes(); ++seed) {
    Vec s = Vec::Zero(d.modes());
    s[seed] = 1.0;
    const double pivot_sq = w_pivot.dot(d.gram() * w_pivot);
    Vec cand = s;
    if (pivot_sq > 0.0)
      cand -= (s.dot(d.gram() * w_pivot) / pivot_sq) * w_pivot;
    const double cand_sq = cand.dot(d.gram() * cand);
    if (cand_sq * grid.delta > 1e-20) {
      w_hat = cand / std::sqrt(cand_sq * grid.delta);
      built = true;
      break;
    }
  }
  if (!built)
    throw NumericalError("family construction: could not orthogonalize a seed block");

  SampledControl v_hat{grid, std::vector<Vec>(grid.blocks, Vec::Zero(d.modes())), true};
  v_hat.blocks[pivot - 1] = w_hat;
  Vec resp_hat = response(d, v_hat);
  if (resp_star.dot(resp_hat) > 0.0) {
    v_hat.blocks[pivot - 1] = -w_hat;
    resp_hat = -resp_hat;
  }

  const double a_d = resp_hat.norm();
  const double c_d = resp_star.norm();
  const double z_star_norm =
      solve_jp_sampled(d, y0, target, grid).minimizer.norm();

  const double r = target.radius;
  double lambda_hat = 0.5;
  if (c_d > 0.0)
    lambda_hat = std::min(
        r * m_delta * m_delta * m_delta / (z_star_norm * c_d * c_d * (M - m_delta)),
        0.5);
  const double alpha = 1.0 + lambda_hat * (M - m_delta) / m_delta;

  double beta_sq = M * (1.0 - lambda_hat) * (M - m_delta);
  if (a_d > 0.0)
    beta_sq = std::min(beta_sq,
                       lambda_hat * r * m_delta * (M - m_delta) / (z_star_norm * a_d * a_d));
  const double beta_max = std::sqrt(std::max(0.0, beta_sq));

  FamilyResult out;
  out.alpha = alpha;
  out.beta_max = beta_max;
  out.minimal_norm_control = u_star;
  out.optimal_time = ts.optimal_time;
  out.minimal_norm = m_delta;

  for (double frac : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    const double beta = frac * beta_max;
    SampledControl member{grid, {}, true};
    member.blocks.resize(grid.blocks);
    for (int i = 0; i < grid.blocks; ++i) {
      member.blocks[i] = alpha * u_star.blocks[i];
      if (i == pivot - 1) member.blocks[i] += beta * v_hat.blocks[i];
    }
    const double norm = std::sqrt(control_norm_sq(d, member));
    const double reach = final_state(d, y0, member).norm();
    if (!(norm <= M + 1e-10 && reach <= r + 1e-8))
      throw NumericalError("family member failed optimality verification");
    out.members.push_back(std::move(member));
  }
  return out;
}

double family_vs_distributed_error(const DomainSpec& d, const Vec& y0,
                                   const BallTarget& target, double M,
                                   double delta) {
  TimeSolution dist = optimal_time_distributed(d, y0, target, M);
  const AdjointControl u_star = std::get<AdjointControl>(*dist.control);
  FamilyResult fam = build_optimal_family(d, y0, target, M, delta);
  double worst = 0.0;
  for (const auto& member : fam.members)
    worst = std::max(worst, control_error(d, member, u_star));
  return worst;
}

std::vector<std::pair<double, double>>
quadratic_gap_hunt(const DomainSpec& d, const Vec& y0, const BallTarget& target,
                   double M, int k_min, int k_max) {
  if (k_min < 2 || k_max < k_min) throw ConfigError("hunt k range is empty");
  const double T = optimal_time_distributed(d, y0, target, M).optimal_time;

  std::vector<std::pair<double, double>> found;
  for (int k = k_min; k <= k_max; ++k) {
    auto lands = [&](double delta) {
      try {
        return optimal_time_sampled(d, y0, target, M, delta).blocks == k + 1;
      } catch (const Error&) {
        return false;
      }
    };
    // T_delta = (k+1) delta is impossible at or below T/(k+1) (the sampled
    // time never undershoots T); the admissibility boundary sits just above
    // and is monotone, so bisect it.
    double lo = T / (k + 1);
    double hi = 0.0;
    for (double a : {0.02, 0.1, 0.3, 0.6, 0.9}) {
      const double cand = T / (k + a);
      if (lands(cand)) { hi = cand; break; }
    }
    if (hi == 0.0) continue; // reported as a gap in the hunt
    for (int it = 0; it < 100 && hi - lo > 1e-15 * hi; ++it) {
      const double mid = 0.5 * (lo + hi);
      (lands(mid) ? hi : lo) = mid;
    }
    found.emplace_back(hi, (k + 1) * hi - T);
  }
  return found;
}

std::vector<std::pair<double, double>>
dyadic_norm_gap(const DomainSpec& d, const Vec& y0, const BallTarget& target,
                double horizon, int k0, int levels) {
  if (k0 < 2) throw ConfigError("dyadic ladder needs k0 >= 2");
  if (levels < 1) throw ConfigError("dyadic ladder needs at least one level");
  const double n_cont = norm_value_or_zero(d, y0, target, horizon);
  if (!(n_cont > 0.0))
    throw ConfigError("dyadic ladder horizon reaches past the exit time");
  std::vector<std::pair<double, double>> rows;
  int k = k0;
  for (int l = 0; l < levels; ++l, k *= 2) {
    const double delta = horizon / k;
    const double n_samp =
        sampled_norm_value_or_zero(d, y0, target, SamplingGrid(delta, k));
    rows.emplace_back(delta, n_samp - n_cont);
  }
  return rows;
}

} // namespace heatctl
