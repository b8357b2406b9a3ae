#include "heatctl/gramian.hpp"

#include <cmath>

namespace heatctl {

namespace {

// (1 - e^{-x}) / x, accurate near zero.
double one_minus_exp_over(double x) {
  if (std::abs(x) < 1e-5) return 1.0 - x / 2.0 + x * x / 6.0 - x * x * x / 24.0;
  return -std::expm1(-x) / x;
}

// 8-point Gauss-Legendre rule on [-1, 1].
constexpr int kGaussNodes = 8;
constexpr double kGaussX[kGaussNodes] = {
    -0.9602898564975362, -0.7966664774136267, -0.5255324099163290,
    -0.1834346424956498, 0.1834346424956498,  0.5255324099163290,
    0.7966664774136267,  0.9602898564975362};
constexpr double kGaussW[kGaussNodes] = {
    0.1012285362903763, 0.2223810344533745, 0.3137066458778873,
    0.3626837833783620, 0.3626837833783620, 0.3137066458778873,
    0.2223810344533745, 0.1012285362903763};

int block_index(double t, const SamplingGrid& grid) {
  int i = static_cast<int>(std::ceil(t / grid.delta)) - 1;
  if (i < 0) i = 0;
  if (i >= grid.blocks) i = grid.blocks - 1;
  return i;
}

} // namespace

Gramian continuous_gramian(const DomainSpec& d, double T) {
  if (!(T > 0.0)) throw ConfigError("gramian horizon must be positive");
  const int n = d.modes();
  Mat W(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j <= i; ++j) {
      const double s = d.lambda(i) + d.lambda(j);
      const double w = d.gram()(i, j) * (-std::expm1(-s * T)) / s;
      W(i, j) = w;
      W(j, i) = w;
    }
  }
  return Gramian{std::move(W), T, GramianKind::Continuous, 0.0, 0};
}

Gramian sampled_gramian(const DomainSpec& d, const SamplingGrid& grid) {
  const int n = d.modes();
  const double delta = grid.delta;
  const int k = grid.blocks;
  const Vec mu = averaging_factors(d, delta);
  // delta * sum_{l=0}^{k-1} e^{-s l delta} = delta (1-e^{-s k delta})/(1-e^{-s delta})
  Mat W(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j <= i; ++j) {
      const double s = d.lambda(i) + d.lambda(j);
      const double geom = -std::expm1(-s * k * delta) / -std::expm1(-s * delta);
      const double w = d.gram()(i, j) * mu[i] * mu[j] * delta * geom;
      W(i, j) = w;
      W(j, i) = w;
    }
  }
  return Gramian{std::move(W), grid.horizon(), GramianKind::Sampled, delta, k};
}

Vec averaging_factors(const DomainSpec& d, double delta) {
  if (!(delta > 0.0)) throw ConfigError("sampling period must be positive");
  Vec mu(d.modes());
  for (int j = 0; j < d.modes(); ++j)
    mu[j] = one_minus_exp_over(d.lambda(j) * delta);
  return mu;
}

Vec block_decay(const DomainSpec& d, const SamplingGrid& grid, int block) {
  if (block < 1 || block > grid.blocks)
    throw ConfigError("block index out of range");
  const Vec mu = averaging_factors(d, grid.delta);
  const double tail = (grid.blocks - block) * grid.delta;
  return (mu.array() * (-tail * d.lambdas().array()).exp()).matrix();
}

TimeSignal::TimeSignal(std::vector<double> nodes, std::vector<double> weights,
                       std::vector<Vec> values)
    : nodes_(std::move(nodes)), weights_(std::move(weights)),
      values_(std::move(values)) {
  if (nodes_.size() != weights_.size() || nodes_.size() != values_.size())
    throw ConfigError("time signal arrays must have equal length");
}

TimeSignal TimeSignal::on_grid(const SamplingGrid& grid, int nodes_per_block,
                               const std::function<Vec(double)>& f) {
  if (nodes_per_block < 1) throw ConfigError("nodes_per_block must be >= 1");
  std::vector<double> nodes, weights;
  std::vector<Vec> values;
  nodes.reserve(grid.blocks * nodes_per_block * kGaussNodes);
  for (int i = 0; i < grid.blocks; ++i) {
    const double block_lo = i * grid.delta;
    const double sub = grid.delta / nodes_per_block;
    for (int s = 0; s < nodes_per_block; ++s) {
      const double lo = block_lo + s * sub, hi = lo + sub;
      const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
      for (int q = 0; q < kGaussNodes; ++q) {
        const double t = mid + half * kGaussX[q];
        nodes.push_back(t);
        weights.push_back(half * kGaussW[q]);
        values.push_back(f(t));
      }
    }
  }
  return TimeSignal(std::move(nodes), std::move(weights), std::move(values));
}

double inner(const TimeSignal& f, const TimeSignal& g) {
  if (f.size() != g.size())
    throw ConfigError("time signals live on different node sets");
  double acc = 0.0;
  for (std::size_t q = 0; q < f.size(); ++q)
    acc += f.weights()[q] * f.values()[q].dot(g.values()[q]);
  return acc;
}

double norm_sq(const TimeSignal& f) { return inner(f, f); }

TimeSignal block_average(const TimeSignal& f, const SamplingGrid& grid) {
  const double horizon = grid.horizon();
  double wsum = 0.0;
  for (std::size_t q = 0; q < f.size(); ++q) {
    if (f.nodes()[q] <= 0.0 || f.nodes()[q] > horizon + 1e-12 * horizon)
      throw ConfigError("signal node outside sampling horizon");
    wsum += f.weights()[q];
  }
  if (std::abs(wsum - horizon) > 1e-9 * horizon)
    throw ConfigError("signal weights do not cover the sampling horizon");

  const int n = f.values().empty() ? 0 : static_cast<int>(f.values()[0].size());
  std::vector<Vec> means(grid.blocks, Vec::Zero(n));
  std::vector<double> lens(grid.blocks, 0.0);
  for (std::size_t q = 0; q < f.size(); ++q) {
    const int i = block_index(f.nodes()[q], grid);
    means[i] += f.weights()[q] * f.values()[q];
    lens[i] += f.weights()[q];
  }
  for (int i = 0; i < grid.blocks; ++i)
    if (lens[i] > 0.0) means[i] /= lens[i];

  std::vector<Vec> values(f.size());
  for (std::size_t q = 0; q < f.size(); ++q)
    values[q] = means[block_index(f.nodes()[q], grid)];
  return TimeSignal(f.nodes(), f.weights(), std::move(values));
}

std::array<double, 3> pythagoras_check(const TimeSignal& f, const SamplingGrid& grid) {
  const TimeSignal fbar = block_average(f, grid);
  double nf = 0.0, nb = 0.0, nd = 0.0;
  for (std::size_t q = 0; q < f.size(); ++q) {
    const double w = f.weights()[q];
    nf += w * f.values()[q].squaredNorm();
    nb += w * fbar.values()[q].squaredNorm();
    nd += w * (f.values()[q] - fbar.values()[q]).squaredNorm();
  }
  return {nf, nb, nd};
}

double interpolation_ratio(const DomainSpec& d, double T, double S, const Vec& z) {
  if (!(0.0 < S && S < T)) throw ConfigError("interpolation ratio needs 0 < S < T");
  if (z.size() != d.modes())
    throw ConfigError("z size does not match mode count");
  const double zn = z.norm();
  if (zn == 0.0) throw ConfigError("interpolation ratio undefined for z = 0");

  const double num = semigroup_apply(d, T, z).norm();
  // (1/S) \int_0^S phi(t;T,z) dt has mode-j coefficient
  // e^{-lambda_j (T-S)} (1-e^{-lambda_j S})/(lambda_j S) z_j.
  Vec m(d.modes());
  for (int j = 0; j < d.modes(); ++j)
    m[j] = std::exp(-d.lambda(j) * (T - S)) *
           one_minus_exp_over(d.lambda(j) * S) * z[j];
  const double omega_norm_sq = m.dot(d.gram() * m);
  const double den = std::sqrt(zn) * std::pow(omega_norm_sq, 0.25);
  if (!(den > 0.0))
    throw NumericalError("interpolation ratio: window average vanished");
  return num / den;
}

} // namespace heatctl
