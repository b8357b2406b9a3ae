#ifndef HEATCTL_MIN_NORM_HPP
#define HEATCTL_MIN_NORM_HPP

#include <variant>
#include <vector>

#include "heatctl/gramian.hpp"

namespace heatctl {

/// Optimal control of the fixed-horizon norm problem, stored symbolically:
/// v(t) = chi_omega phi(t; T, z) with phi_j(t) = e^{-lambda_j (T-t)} z_j.
struct AdjointControl {
  double horizon;
  Vec generator; // z*
};

/// Piecewise-constant-in-time control on a sampling grid.
///
/// Each block stores a coefficient vector w_i in the eigenbasis.  With
/// masked = true the control value on block i is the cut-off function
/// chi_omega * (sum_j w_ij e_j), which is the exact form of averaged-adjoint
/// controls; inner products and state responses then run through the Gram
/// matrix.  With masked = false the value is the plain eigenfunction
/// combination and norms are plain coefficient sums.
struct SampledControl {
  SamplingGrid grid;
  std::vector<Vec> blocks;
  bool masked = true;

  /// First J spectral coefficients of the control value on a block
  /// (for masked controls this applies the Gram matrix).
  Vec coefficients(const DomainSpec& d, int block) const;
};

double control_norm_sq(const DomainSpec& d, const SampledControl& u);

/// Norm restricted to (0, T); T may cut a block.
double control_norm_sq_upto(const DomainSpec& d, const SampledControl& u, double T);

/// \int_0^T <u(t), chi_omega phi(t; v.horizon, v.generator)> dt, evaluated
/// from exponential antiderivatives per block.
double cross_inner_upto(const DomainSpec& d, const SampledControl& u,
                        const AdjointControl& v, double T);

/// ||u - v||_{L2(0, v.horizon; L2)}; requires u to extend past v.horizon.
double control_error(const DomainSpec& d, const SampledControl& u,
                     const AdjointControl& v);

/// y(horizon; 0, u): the controlled state at the grid horizon from zero data.
Vec response(const DomainSpec& d, const SampledControl& u);

/// y(horizon; y0, u).
Vec final_state(const DomainSpec& d, const Vec& y0, const SampledControl& u);

/// Solver output for the norm problems.
struct NormSolution {
  Vec minimizer;   // z*
  double value;    // V = J(z*)
  double norm;     // N = sqrt(z*^T W z*)
  double residual; // || W z* + q + r z*/||z*|| ||
  Vec final_state; // equals -r z*/||z*||
  std::variant<AdjointControl, SampledControl> control;
};

/// Minimizes J(z) = 1/2 z^T W z + q^T z + r ||z|| with W the continuous
/// Gramian and q_j = e^{-lambda_j T} y0_j.  Requires 0 < T < exit time.
NormSolution solve_jp_continuous(const DomainSpec& d, const Vec& y0,
                                 const BallTarget& target, double T);

/// Sampled counterpart on a grid with k >= 2 and k*delta < exit time.
NormSolution solve_jp_sampled(const DomainSpec& d, const Vec& y0,
                              const BallTarget& target, const SamplingGrid& grid);

struct SecularResult {
  Vec z;
  double residual = 0.0;
  int iterations = 0;
  bool zero_minimizer = false;
};

/// Minimizer of 1/2 z^T W z + q^T z + r ||z|| via the parametric solve
/// z(nu) = -(W + nu I)^{-1} q and a safeguarded Newton/bisection root find
/// of nu ||z(nu)|| = r.  Falls back to proximal-gradient iteration if the
/// root find stalls.  Signals zero_minimizer when ||q|| <= r.
SecularResult secular_solve(const Mat& W, const Vec& q, double r,
                            double tol = 1e-12);

/// Exact minimizer of (1/C)||u||^2 + (1/eps)||y(k delta; y0, u)||^2 over
/// sampled controls (plain blocks), plus the attained value.
std::pair<SampledControl, double>
l2_approx_null_control(const DomainSpec& d, const Vec& y0,
                       const SamplingGrid& grid, double eps, double cost);

} // namespace heatctl

#endif
