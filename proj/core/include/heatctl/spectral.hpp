#ifndef HEATCTL_SPECTRAL_HPP
#define HEATCTL_SPECTRAL_HPP

#include <Eigen/Dense>

#include "heatctl/errors.hpp"

namespace heatctl {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Coefficient vector of an L2(0,L) element in the Dirichlet sine eigenbasis.
using SpectralVec = Eigen::VectorXd;

/// Closed ball B_r(0) in L2, the control target.
struct BallTarget {
  double radius;

  explicit BallTarget(double r) : radius(r) {
    if (!(r > 0.0)) throw ConfigError("target radius must be positive");
  }
};

/// Spatial problem data on the interval (0, L) with Dirichlet conditions:
/// eigenvalues lambda_j = (j*pi/L)^2, normalized eigenfunctions
/// e_j(x) = sqrt(2/L) sin(j*pi*x/L), and the actuator Gram matrix
/// G_ij = \int_omega e_i e_j dx for the control window omega = (a, b).
/// All entries are evaluated from closed-form antiderivatives.
class DomainSpec {
public:
  DomainSpec(double L, double a, double b, int modes);

  double length() const { return length_; }
  double omega_lo() const { return a_; }
  double omega_hi() const { return b_; }
  int modes() const { return modes_; }

  const Vec& lambdas() const { return lambdas_; }
  double lambda(int j) const { return lambdas_[j]; } // 0-based
  double lambda1() const { return lambdas_[0]; }

  const Mat& gram() const { return gram_; }

  bool full_window() const { return full_window_; }

  /// Same interval and window, different truncation level.
  DomainSpec with_modes(int modes) const {
    return DomainSpec(length_, a_, b_, modes);
  }

private:
  double length_, a_, b_;
  int modes_;
  bool full_window_;
  Vec lambdas_;
  Mat gram_;
};

/// Factory matching the natural argument order (L, a, b, J).
inline DomainSpec build_domain(double L, double a, double b, int modes) {
  return DomainSpec(L, a, b, modes);
}

/// Heat semigroup e^{Delta t} acting on eigencoefficients:
/// (e^{-lambda_j t} v_j)_j.  Contraction for t >= 0.
Vec semigroup_apply(const DomainSpec& d, double t, const Vec& v);

/// Last time the free trajectory stays outside the target ball:
/// the unique root of sum_j y0_j^2 e^{-2 lambda_j t} = r^2, located by
/// bisection (absolute tolerance 1e-12) after geometric bracket expansion.
/// Requires ||y0|| > r.
double exit_time(const DomainSpec& d, const Vec& y0, const BallTarget& target);

} // namespace heatctl

#endif
