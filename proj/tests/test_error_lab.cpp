#include <doctest.h>

#include <cmath>
#include <random>

#include "heatctl/error_lab.hpp"

using namespace heatctl;

namespace {

struct Lab {
  DomainSpec d = build_domain(1.0, 0.25, 0.75, 24);
  Vec y0;
  BallTarget target{1.0};
  double t_exit;
  double M;
  EtaSet witness;

  Lab() {
    y0 = Vec::Zero(24);
    y0[0] = 2.0;
    y0[1] = 0.5;
    t_exit = exit_time(d, y0, target);
    M = solve_jp_continuous(d, y0, target, 0.6 * t_exit).norm;
    witness = build_eta_set(d, y0, target, M, 0.5, 3, 60);
  }
};

const Lab& lab() {
  static Lab instance;
  return instance;
}

} // namespace

TEST_CASE("eta set: interval membership and endpoint exclusion") {
  const Lab& L = lab();
  const EtaSet& A = L.witness;
  REQUIRE(A.cutoff > 0.0);

  // delta = T/(k + a) with a in (0, eta) lies in the candidate set
  for (int k = 20; k <= 40; ++k) {
    const double inside = A.t_star / (k + 0.3 * A.eta);
    if (inside < A.cutoff) CHECK(A.contains(inside));
    const double outside = A.t_star / (k + A.eta + 0.3 * (1.0 - A.eta));
    CHECK(!A.contains(outside));
    CHECK(!A.contains(A.t_star / k)); // open endpoint
  }
}

TEST_CASE("eta set: density at zero approaches eta") {
  const Lab& L = lab();
  const EtaSet& A = L.witness;
  const double h = std::min(A.t_star / 50.0, 0.5 * A.cutoff);
  const double density = A.measure_below(h) / h;
  CHECK(std::abs(density - A.eta) <= 0.02);
}

TEST_CASE("eta set: gap equals (1-a) delta on the witness intervals") {
  const Lab& L = lab();
  const EtaSet& A = L.witness;
  for (double a : {0.1, 0.25, 0.45}) {
    int k = static_cast<int>(std::floor(A.t_star / (0.75 * A.cutoff)));
    const double delta = A.t_star / (k + a * 1.0);
    if (!A.contains(delta)) continue;
    const TimeSolution ts = optimal_time_sampled(L.d, L.y0, L.target, L.M, delta);
    CHECK(ts.blocks == k + 1);
    CHECK(ts.optimal_time - A.t_star ==
          doctest::Approx((1.0 - a) * delta).epsilon(1e-9));
  }
}

TEST_CASE("sweep rows: brackets, membership, and annotations") {
  const Lab& L = lab();
  std::vector<double> deltas;
  for (int k = 6; k <= 18; ++k) {
    deltas.push_back(L.witness.t_star / (k + 0.25 * L.witness.eta));
    deltas.push_back(L.witness.t_star / (k + 0.75));
  }
  const auto rows = sweep(L.d, L.y0, L.target, L.M, deltas, &L.witness, 2);
  REQUIRE(rows.size() == deltas.size());
  int in_a = 0;
  for (const auto& r : rows) {
    REQUIRE(r.note.empty());
    CHECK(r.T_gap >= -1e-10);
    CHECK(r.norm_gap >= -1e-10);
    CHECK(r.T_gap <= 2.0 * r.delta + 1e-10);
    if (r.in_A) {
      ++in_a;
      CHECK(r.T_gap > (1.0 - L.witness.eta) * r.delta);
      CHECK(r.T_gap < r.delta);
      CHECK(r.ctrl_err_min_norm >=
            0.5 * std::pow(L.d.lambda1(), 1.5) * L.target.radius *
                (1.0 - L.witness.eta) * r.delta);
    }
  }
  CHECK(in_a >= 5);
}

TEST_CASE("fit_order recovers synthetic power laws") {
  std::vector<std::pair<double, double>> pts;
  for (int i = 0; i < 12; ++i) {
    const double delta = 0.1 / std::pow(2.0, i);
    pts.emplace_back(delta, 3.7 * std::pow(delta, 1.5));
  }
  const OrderFit fit = fit_order(pts);
  CHECK(fit.slope == doctest::Approx(1.5).epsilon(1e-6));
  CHECK(fit.intercept == doctest::Approx(std::log(3.7)).epsilon(1e-6));
  CHECK(fit.r_squared == doctest::Approx(1.0).epsilon(1e-9));

  pts.emplace_back(0.2, -1.0); // dropped with a warning count
  const OrderFit refit = fit_order(pts);
  CHECK(refit.points_dropped == 1);
  CHECK(refit.slope == doctest::Approx(1.5).epsilon(1e-6));
}

TEST_CASE("dyadic norm-gap ladder decays quadratically") {
  const Lab& L = lab();
  const auto ladder = dyadic_norm_gap(L.d, L.y0, L.target, L.witness.t_star, 4, 7);
  REQUIRE(ladder.size() == 7);
  for (const auto& [delta, gap] : ladder) CHECK(gap >= -1e-12);
  const OrderFit fit = fit_order(ladder);
  CHECK(fit.slope >= 1.8);
  CHECK(fit.slope <= 2.2);
}

TEST_CASE("optimal family: members verified, beta axis point, reverse triangle") {
  const Lab& L = lab();
  // pick a witness delta comfortably below the cutoff
  double delta = 0.0;
  for (int k = 12; k <= 40; ++k) {
    const double cand = L.witness.t_star / (k + 0.5 * L.witness.eta);
    if (L.witness.contains(cand)) { delta = cand; break; }
  }
  REQUIRE(delta > 0.0);

  const FamilyResult fam = build_optimal_family(L.d, L.y0, L.target, L.M, delta);
  CHECK(fam.beta_max > 0.0);
  REQUIRE(fam.members.size() == 5);

  for (const auto& member : fam.members) {
    CHECK(std::sqrt(control_norm_sq(L.d, member)) <= L.M + 1e-10);
    CHECK(final_state(L.d, L.y0, member).norm() <= L.target.radius + 1e-8);
  }

  // beta = 0 member is the alpha-rescaled minimal-norm control
  const auto& first = fam.members.front();
  double worst = 0.0;
  for (int i = 0; i < first.grid.blocks; ++i)
    worst = std::max(worst, (first.blocks[i] -
                             fam.alpha * fam.minimal_norm_control.blocks[i])
                                .norm());
  CHECK(worst <= 1e-12);

  // family error exceeds beta_max - ctrl_err (reverse triangle via u*_delta)
  const TimeSolution dist = optimal_time_distributed(L.d, L.y0, L.target, L.M);
  const AdjointControl u_star = std::get<AdjointControl>(*dist.control);
  const double ctrl_err = control_error(L.d, fam.minimal_norm_control, u_star);
  const double fam_err =
      family_vs_distributed_error(L.d, L.y0, L.target, L.M, delta);
  CHECK(fam_err >= fam.beta_max - ctrl_err - 1e-10);
}

TEST_CASE("quadratic gap hunt: gaps scale like delta^2, defeating order 1") {
  const Lab& L = lab();
  const auto hunted = quadratic_gap_hunt(L.d, L.y0, L.target, L.M, 8, 12);
  REQUIRE(hunted.size() == 5);
  double max_ratio = 0.0, min_ratio = 1e300;
  for (const auto& [delta, gap] : hunted) {
    CHECK(gap >= 0.0);
    CHECK(gap / delta < 0.05); // far below any order-1 lower bound
    const double ratio = gap / (delta * delta);
    max_ratio = std::max(max_ratio, ratio);
    min_ratio = std::min(min_ratio, ratio);
  }
  CHECK(max_ratio / min_ratio < 10.0);
}
