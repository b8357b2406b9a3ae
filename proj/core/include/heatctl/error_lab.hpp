#ifndef HEATCTL_ERROR_LAB_HPP
#define HEATCTL_ERROR_LAB_HPP

#include <optional>
#include <string>
#include <vector>

#include "heatctl/time_optimal.hpp"

namespace heatctl {

/// One record of the delta sweep.
struct SweepRow {
  double delta = 0.0;
  int k = 0;                        // T_delta = k * delta
  double T_gap = 0.0;               // T_delta(M,y0) - T(M,y0)
  double ctrl_err_min_norm = 0.0;   // ||u*_{M,delta} - u*_M||_{L2(0,T(M,y0))}
  double norm_gap = 0.0;            // N_delta - N at the horizon T_delta
  std::optional<double> family_err; // max over constructed optimal family
  bool in_A = false;
  std::string note;                 // solver failure annotation, row kept
};

/// The witness set A_{M,eta}: a union of intervals (T*/(k+eta), T*/k) with
/// T* = T(M, y0), cut at an empirically determined delta below which the
/// budget-margin inequality M >= N_delta(T_delta) + 1/2 lambda_1^{3/2} r
/// (1-eta) delta holds on the whole sampled grid.
struct EtaSet {
  double M = 0.0;
  double eta = 0.0;
  double t_star = 0.0; // T(M, y0)
  int k_min = 0, k_max = 0;
  std::vector<std::pair<double, double>> intervals; // descending in delta
  double cutoff = 0.0; // delta^1

  bool contains(double delta) const;
  /// Lebesgue measure of A intersected with (0, h), summed analytically
  /// from the interval endpoints.
  double measure_below(double h) const;
};

EtaSet build_eta_set(const DomainSpec& d, const Vec& y0, const BallTarget& target,
                     double M, double eta, int k_min, int k_max);

std::vector<SweepRow> sweep(const DomainSpec& d, const Vec& y0,
                            const BallTarget& target, double M,
                            const std::vector<double>& deltas,
                            const EtaSet* witness = nullptr, int threads = 1);

struct OrderFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  int points_used = 0;
  int points_dropped = 0; // nonpositive values excluded
};

/// Least-squares fit of log(value) against log(delta).
OrderFit fit_order(const std::vector<std::pair<double, double>>& points);

enum class SweepField { TGap, CtrlErr, NormGap, FamilyErr };
OrderFit fit_order(const std::vector<SweepRow>& rows, SweepField field);

/// Constructive family of optimal controls of the sampled time problem:
/// members alpha u*_delta + beta v_hat with v_hat unit-norm, supported in
/// (0, T(M,y0)), orthogonal to u*_delta, and pushing the final state
/// inward.  beta_max is a lower bound for the family diameter.
struct FamilyResult {
  std::vector<SampledControl> members;
  double beta_max = 0.0;
  double alpha = 0.0;
  SampledControl minimal_norm_control{SamplingGrid(1.0, 1), {}, true};
  double optimal_time = 0.0;       // T_delta
  double minimal_norm = 0.0;       // M_delta = N_delta(T_delta)
};

FamilyResult build_optimal_family(const DomainSpec& d, const Vec& y0,
                                  const BallTarget& target, double M,
                                  double delta);

/// max over family members of ||u - u*_M||_{L2(0, T(M,y0))}.
double family_vs_distributed_error(const DomainSpec& d, const Vec& y0,
                                   const BallTarget& target, double M,
                                   double delta);

/// For each k, the smallest delta above T*/(k+1) with T_delta = (k+1) delta,
/// located by bisection of the monotone admissibility boundary; the returned
/// gaps scale like delta^2.
std::vector<std::pair<double, double>>
quadratic_gap_hunt(const DomainSpec& d, const Vec& y0, const BallTarget& target,
                   double M, int k_min, int k_max);

/// Matched-horizon gap ladder: N_delta(T_h) - N(T_h) with T_h = k0 * delta_0
/// fixed and delta halved per level.
std::vector<std::pair<double, double>>
dyadic_norm_gap(const DomainSpec& d, const Vec& y0, const BallTarget& target,
                double horizon, int k0, int levels);

} // namespace heatctl

#endif
