#include <doctest.h>

#include <Eigen/Eigenvalues>

#include <cmath>
#include <random>

#include "heatctl/gramian.hpp"
#include "oracles.hpp"

using namespace heatctl;

namespace {

Vec random_vec(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> gauss;
  Vec v(n);
  for (int j = 0; j < n; ++j) v[j] = gauss(rng);
  return v;
}

} // namespace

TEST_CASE("continuous gramian: diagonal closed form on the full window") {
  const DomainSpec d = build_domain(1.0, 0.0, 1.0, 5);
  const double T = 0.07;
  const Gramian g = continuous_gramian(d, T);
  for (int j = 0; j < 5; ++j) {
    const double lam = d.lambda(j);
    CHECK(g.matrix(j, j) ==
          doctest::Approx((1.0 - std::exp(-2.0 * lam * T)) / (2.0 * lam))
              .epsilon(1e-14));
  }
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < i; ++j) CHECK(g.matrix(i, j) == 0.0);
}

TEST_CASE("continuous gramian: long-horizon limit 1/(2 lambda)") {
  const DomainSpec d = build_domain(1.0, 0.0, 1.0, 3);
  const Gramian g = continuous_gramian(d, 50.0);
  for (int j = 0; j < 3; ++j)
    CHECK(g.matrix(j, j) == doctest::Approx(1.0 / (2.0 * d.lambda(j))).epsilon(1e-12));
}

TEST_CASE("continuous gramian quadratic form matches quadrature") {
  const DomainSpec d = build_domain(1.0, 0.25, 0.75, 8);
  const double T = 0.05;
  const Mat W = continuous_gramian(d, T).matrix;
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 5; ++trial) {
    const Vec z = random_vec(rng, 8);
    const double direct = oracles::gauss5(
        [&](double t) {
          Vec phi(8);
          for (int j = 0; j < 8; ++j)
            phi[j] = std::exp(-d.lambda(j) * (T - t)) * z[j];
          return phi.dot(d.gram() * phi);
        },
        0.0, T, 128);
    CHECK(z.dot(W * z) == doctest::Approx(direct).epsilon(1e-10));
  }
}

TEST_CASE("sampled gramian: scalar closed form for one block") {
  const DomainSpec d = build_domain(1.0, 0.0, 1.0, 1);
  const double delta = 0.02;
  const Gramian g = sampled_gramian(d, SamplingGrid(delta, 1));
  const double lam = d.lambda(0);
  const double mu = (1.0 - std::exp(-lam * delta)) / (lam * delta);
  CHECK(g.matrix(0, 0) == doctest::Approx(delta * mu * mu).epsilon(1e-13));
}

TEST_CASE("sampled gramian converges to the continuous one as delta -> 0") {
  const DomainSpec d = build_domain(1.0, 0.25, 0.75, 6);
  const double T = 0.06;
  const Mat W = continuous_gramian(d, T).matrix;
  double prev = 1e100;
  for (int k : {4, 16, 64, 256}) {
    const Mat Wd = sampled_gramian(d, SamplingGrid(T / k, k)).matrix;
    const double gap = (W - Wd).norm();
    CHECK(gap < prev);
    prev = gap;
  }
  CHECK(prev < 1e-6);
}

TEST_CASE("sampled gramian quadratic form matches averaged-adjoint quadrature") {
  const DomainSpec d = build_domain(1.0, 0.25, 0.75, 8);
  const double delta = 0.01;
  const int k = 5;
  const Mat Wd = sampled_gramian(d, SamplingGrid(delta, k)).matrix;
  const double T = delta * k;
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 5; ++trial) {
    const Vec z = random_vec(rng, 8);
    // block means of phi computed by quadrature, independent of the
    // closed-form averaging factors
    double acc = 0.0;
    for (int i = 0; i < k; ++i) {
      Vec mean = Vec::Zero(8);
      for (int j = 0; j < 8; ++j) {
        mean[j] = oracles::gauss5(
                      [&](double t) { return std::exp(-d.lambda(j) * (T - t)) * z[j]; },
                      i * delta, (i + 1) * delta, 32) /
                  delta;
      }
      acc += delta * mean.dot(d.gram() * mean);
    }
    CHECK(z.dot(Wd * z) == doctest::Approx(acc).epsilon(1e-10));
  }
}

TEST_CASE("averaging factors tend to one for slow modes") {
  const DomainSpec d = build_domain(100.0, 0.0, 100.0, 2); // tiny lambda
  const Vec mu = averaging_factors(d, 1e-6);
  CHECK(mu[0] == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(mu.maxCoeff() <= 1.0);
}

TEST_CASE("W - W_delta is PSD at a matched horizon") {
  const DomainSpec d = build_domain(1.0, 0.25, 0.75, 12);
  const double delta = 0.008;
  const int k = 6;
  const Mat W = continuous_gramian(d, delta * k).matrix;
  const Mat Wd = sampled_gramian(d, SamplingGrid(delta, k)).matrix;
  Eigen::SelfAdjointEigenSolver<Mat> es(W - Wd, Eigen::EigenvaluesOnly);
  CHECK(es.eigenvalues().minCoeff() >= -1e-10 * W.norm());
}

TEST_CASE("block average: fixed point, linear mean, idempotence, contraction") {
  const SamplingGrid grid(0.25, 4);

  const TimeSignal constant = TimeSignal::on_grid(
      grid, 2, [](double) { return Vec::Constant(1, 3.5); });
  const TimeSignal cbar = block_average(constant, grid);
  for (std::size_t q = 0; q < cbar.size(); ++q)
    CHECK(cbar.values()[q][0] == doctest::Approx(3.5).epsilon(1e-15));

  const SamplingGrid one(0.3, 1);
  const TimeSignal linear =
      TimeSignal::on_grid(one, 2, [](double t) { return Vec::Constant(1, t); });
  const TimeSignal lbar = block_average(linear, one);
  CHECK(lbar.values()[0][0] == doctest::Approx(0.15).epsilon(1e-13));

  std::mt19937_64 rng(13);
  const TimeSignal f = TimeSignal::on_grid(grid, 2, [&](double) {
    return random_vec(rng, 3);
  });
  const TimeSignal fbar = block_average(f, grid);
  const TimeSignal fbarbar = block_average(fbar, grid);
  double worst = 0.0;
  for (std::size_t q = 0; q < f.size(); ++q)
    worst = std::max(worst, (fbar.values()[q] - fbarbar.values()[q]).norm());
  CHECK(worst <= 1e-13);
  CHECK(norm_sq(fbar) <= norm_sq(f) * (1.0 + 1e-14));
}

TEST_CASE("averaging duality on random signals") {
  const SamplingGrid grid(0.125, 8);
  std::mt19937_64 rng(14);
  for (int trial = 0; trial < 20; ++trial) {
    const TimeSignal f =
        TimeSignal::on_grid(grid, 1, [&](double) { return random_vec(rng, 4); });
    const TimeSignal g =
        TimeSignal::on_grid(grid, 1, [&](double) { return random_vec(rng, 4); });
    const TimeSignal fb = block_average(f, grid);
    const TimeSignal gb = block_average(g, grid);
    const double scale = std::max(1.0, std::abs(inner(fb, g)));
    CHECK(std::abs(inner(fb, g) - inner(f, gb)) <= 1e-12 * scale);
    CHECK(std::abs(inner(fb, g) - inner(fb, gb)) <= 1e-12 * scale);
  }
}

TEST_CASE("pythagoras identity: linear signal closed form and random checks") {
  const double delta = 0.37;
  const SamplingGrid one(delta, 1);
  const TimeSignal linear =
      TimeSignal::on_grid(one, 2, [](double t) { return Vec::Constant(1, t); });
  const auto [nf, nb, nd] = pythagoras_check(linear, one);
  const double d3 = delta * delta * delta;
  CHECK(nf == doctest::Approx(d3 / 3.0).epsilon(1e-13));
  CHECK(nb == doctest::Approx(d3 / 4.0).epsilon(1e-13));
  CHECK(nd == doctest::Approx(d3 / 12.0).epsilon(1e-12));

  const SamplingGrid grid(0.2, 5);
  const TimeSignal constant = TimeSignal::on_grid(
      grid, 1, [](double) { return Vec::Constant(1, 2.0); });
  const auto [cf, cb, cd] = pythagoras_check(constant, grid);
  CHECK(cf == doctest::Approx(4.0 * 1.0).epsilon(1e-14));
  CHECK(cb == doctest::Approx(4.0 * 1.0).epsilon(1e-14));
  CHECK(cd == doctest::Approx(0.0).epsilon(1e-14));

  std::mt19937_64 rng(15);
  for (int trial = 0; trial < 20; ++trial) {
    const TimeSignal f =
        TimeSignal::on_grid(grid, 1, [&](double) { return random_vec(rng, 6); });
    const auto [a, b, c] = pythagoras_check(f, grid);
    CHECK(std::abs(a - b - c) <= 1e-12 * std::max(1.0, a));
  }
}

TEST_CASE("block average rejects horizon mismatch") {
  const SamplingGrid grid(0.25, 4);
  const TimeSignal f = TimeSignal::on_grid(
      SamplingGrid(0.25, 3), 2, [](double) { return Vec::Constant(1, 1.0); });
  CHECK_THROWS_AS(block_average(f, grid), ConfigError);
}

TEST_CASE("interpolation ratio: closed form on the full window, homogeneity") {
  const DomainSpec d = build_domain(1.0, 0.0, 1.0, 1);
  const double T = 0.4, S = 0.15;
  Vec z(1);
  z << 2.3;
  const double lam = d.lambda(0);
  const double num = std::exp(-lam * T) * std::abs(z[0]);
  const double avg =
      std::exp(-lam * (T - S)) * (1.0 - std::exp(-lam * S)) / (lam * S) *
      std::abs(z[0]);
  const double want = num / (std::sqrt(std::abs(z[0])) * std::sqrt(avg));
  CHECK(interpolation_ratio(d, T, S, z) == doctest::Approx(want).epsilon(1e-12));

  const DomainSpec w = build_domain(1.0, 0.25, 0.75, 6);
  std::mt19937_64 rng(16);
  const Vec zz = random_vec(rng, 6);
  const double r1 = interpolation_ratio(w, 0.3, 0.1, zz);
  const double r2 = interpolation_ratio(w, 0.3, 0.1, Vec(17.0 * zz));
  CHECK(r1 == doctest::Approx(r2).epsilon(1e-12));
}

TEST_CASE("interpolation ratio stays finite over random draws") {
  const DomainSpec d = build_domain(1.0, 0.25, 0.75, 8);
  std::mt19937_64 rng(17);
  double worst = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const double r = interpolation_ratio(d, 0.2, 0.05, random_vec(rng, 8));
    CHECK(std::isfinite(r));
    worst = std::max(worst, r);
  }
  CHECK(worst > 0.0);
  CHECK_THROWS_AS(interpolation_ratio(d, 0.05, 0.2, random_vec(rng, 8)),
                  ConfigError);
}
