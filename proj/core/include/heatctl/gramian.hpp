#ifndef HEATCTL_GRAMIAN_HPP
#define HEATCTL_GRAMIAN_HPP

#include <array>
#include <functional>
#include <vector>

#include "heatctl/spectral.hpp"

namespace heatctl {

/// Uniform sampling grid: k blocks ((i-1)*delta, i*delta], i = 1..k.
struct SamplingGrid {
  double delta;
  int blocks;

  SamplingGrid(double delta_, int blocks_) : delta(delta_), blocks(blocks_) {
    if (!(delta > 0.0)) throw ConfigError("sampling period must be positive");
    if (blocks < 1) throw ConfigError("block count must be >= 1");
  }
  double horizon() const { return delta * blocks; }
};

enum class GramianKind { Continuous, Sampled };

/// Symmetric PSD matrix W with z^T W z = \int ||chi_omega phi(t)||^2 dt for
/// the backward adjoint phi (continuous kind) or its block average
/// (sampled kind).
struct Gramian {
  Mat matrix;
  double horizon;
  GramianKind kind;
  double delta = 0.0; // sampled only
  int blocks = 0;     // sampled only
};

/// W_ij = G_ij (1 - e^{-(lambda_i+lambda_j) T}) / (lambda_i + lambda_j).
Gramian continuous_gramian(const DomainSpec& d, double T);

/// W_delta = delta * sum_i A_i G A_i with A_i = diag(mu_j e^{-lambda_j (k-i) delta}).
/// Assembled through the geometric closed form of the block sum.
Gramian sampled_gramian(const DomainSpec& d, const SamplingGrid& grid);

/// mu_j = (1 - e^{-lambda_j delta}) / (lambda_j delta), the one-block
/// averaging attenuation per mode.
Vec averaging_factors(const DomainSpec& d, double delta);

/// Diagonal of A_i = diag(mu_j e^{-lambda_j (k-i) delta}), 1-based block index.
Vec block_decay(const DomainSpec& d, const SamplingGrid& grid, int block);

/// Vector-valued time signal sampled at composite Gauss-Legendre nodes.
/// Used by the averaging identities and the quadrature oracles; solvers
/// never integrate through this type.
class TimeSignal {
public:
  TimeSignal(std::vector<double> nodes, std::vector<double> weights,
             std::vector<Vec> values);

  /// Sample f on nodes_per_block Gauss-Legendre nodes per sampling block.
  static TimeSignal on_grid(const SamplingGrid& grid, int nodes_per_block,
                            const std::function<Vec(double)>& f);

  const std::vector<double>& nodes() const { return nodes_; }
  const std::vector<double>& weights() const { return weights_; }
  const std::vector<Vec>& values() const { return values_; }
  std::size_t size() const { return nodes_.size(); }

private:
  std::vector<double> nodes_, weights_;
  std::vector<Vec> values_;
};

/// L2(0,T; L2) inner product of two signals on the same node set.
double inner(const TimeSignal& f, const TimeSignal& g);
double norm_sq(const TimeSignal& f);

/// Blockwise mean of f on the grid, returned on the same node set.
TimeSignal block_average(const TimeSignal& f, const SamplingGrid& grid);

/// (||f||^2, ||f_bar||^2, ||f - f_bar||^2).
std::array<double, 3> pythagoras_check(const TimeSignal& f, const SamplingGrid& grid);

/// ||phi(0;T,z)|| / ( ||z||^{1/2} ||(1/S) \int_0^S phi dt||_omega^{1/2} ),
/// the sampled observability ratio whose constant the experiments fit.
double interpolation_ratio(const DomainSpec& d, double T, double S, const Vec& z);

} // namespace heatctl

#endif
