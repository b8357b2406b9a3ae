#include "heatctl/min_norm.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include <cmath>
#include <sstream>

namespace heatctl {

namespace {

// Mode-m antiderivative \int_{t0}^{t1} e^{-lambda (T - t)} dt, t1 <= T.
Vec decay_integral(const DomainSpec& d, double T, double t0, double t1) {
  Vec out(d.modes());
  for (int j = 0; j < d.modes(); ++j) {
    const double l = d.lambda(j);
    out[j] = (std::exp(-l * (T - t1)) - std::exp(-l * (T - t0))) / l;
  }
  return out;
}

double residual_norm(const Mat& W, const Vec& q, double r, const Vec& z) {
  const double zn = z.norm();
  return (W * z + q + (r / zn) * z).norm();
}

Vec prox_gradient(const Mat& W, const Vec& q, double r, const Vec& start,
                  int max_iter, double step_tol) {
  Eigen::SelfAdjointEigenSolver<Mat> es(W, Eigen::EigenvaluesOnly);
  const double lip = std::max(es.eigenvalues().maxCoeff(), 1e-300);
  const double step = 1.0 / lip;
  Vec z = start;
  for (int it = 0; it < max_iter; ++it) {
    const Vec y = z - step * (W * z + q);
    const double yn = y.norm();
    const double shrink = std::max(0.0, 1.0 - step * r / std::max(yn, 1e-300));
    const Vec znext = shrink * y;
    const double diff = (znext - z).norm();
    z = znext;
    if (diff < step_tol) break;
  }
  return z;
}

} // namespace

SecularResult secular_solve(const Mat& W, const Vec& q, double r, double tol) {
  if (!(r > 0.0)) throw ConfigError("ball radius must be positive");
  const double qn = q.norm();
  SecularResult res;
  if (qn <= r) {
    res.z = Vec::Zero(q.size());
    res.zero_minimizer = true;
    return res;
  }

  // h(nu) = nu ||z(nu)|| - r with z(nu) = -(W + nu I)^{-1} q is strictly
  // increasing from -r toward ||q|| - r > 0.
  auto solve_at = [&](double nu) -> Vec {
    Mat A = W;
    A.diagonal().array() += nu;
    return Eigen::LDLT<Mat>(A).solve(-q);
  };
  auto h = [&](double nu, Vec& z) {
    z = solve_at(nu);
    return nu * z.norm() - r;
  };

  Vec z;
  double nu = r / qn;
  double hv = h(nu, z);
  double lo = nu, hi = nu;
  int guard = 0;
  while (hv < 0.0) {
    lo = hi;
    hi *= 4.0;
    hv = h(hi, z);
    if (++guard > 300) throw NumericalError("secular_solve: no upper bracket");
  }
  guard = 0;
  double hlo = (lo == hi) ? hv : h(lo, z);
  while (hlo > 0.0) {
    hi = lo;
    lo /= 4.0;
    hlo = h(lo, z);
    if (++guard > 300) { lo = 0.0; break; }
  }

  // Safeguarded Newton on nu within [lo, hi].
  nu = 0.5 * (lo + hi);
  const double htol = tol * std::max(1.0, qn);
  int it = 0;
  for (; it < 200; ++it) {
    Mat A = W;
    A.diagonal().array() += nu;
    Eigen::LDLT<Mat> ldlt(A);
    z = ldlt.solve(-q);
    const double zn = z.norm();
    const double hval = nu * zn - r;
    if (std::abs(hval) <= htol) break;
    (hval > 0.0 ? hi : lo) = nu;
    // d/dnu [nu ||z||] = ||z|| - nu z^T (W + nu I)^{-1} z / ||z||
    const Vec dz = ldlt.solve(z);
    const double deriv = zn - nu * z.dot(dz) / zn;
    double next = (deriv > 0.0) ? nu - hval / deriv : nu;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (hi - lo <= 1e-16 * hi) break;
    nu = next;
  }
  res.z = z;
  res.iterations = it;
  res.residual = residual_norm(W, q, r, z);

  if (res.residual > 1e-10 * std::max(1.0, qn)) {
    res.z = prox_gradient(W, q, r, z, 500000, 1e-12);
    res.residual = residual_norm(W, q, r, res.z);
    if (res.residual > 1e-10 * std::max(1.0, qn)) {
      std::ostringstream msg;
      msg << "secular_solve did not converge: residual " << res.residual
          << " after " << it << " secular iterations and proximal fallback";
      throw NumericalError(msg.str());
    }
  }
  return res;
}

namespace {

NormSolution assemble_solution(const DomainSpec& d, const Vec& q, double r,
                               const Gramian& gram,
                               std::variant<AdjointControl, SampledControl> control) {
  const SecularResult sec = secular_solve(gram.matrix, q, r);
  if (sec.zero_minimizer)
    throw ConfigError("target reachable by free dynamics on this horizon");
  NormSolution sol{sec.z, 0.0, 0.0, sec.residual, Vec(), std::move(control)};
  const double quad = sec.z.dot(gram.matrix * sec.z);
  sol.norm = std::sqrt(quad);
  sol.value = 0.5 * quad + q.dot(sec.z) + r * sec.z.norm();
  sol.final_state = q + gram.matrix * sec.z;
  return sol;
}

} // namespace

NormSolution solve_jp_continuous(const DomainSpec& d, const Vec& y0,
                                 const BallTarget& target, double T) {
  if (!(T > 0.0)) throw ConfigError("horizon T must be positive");
  if (!(y0.norm() > target.radius))
    throw ConfigError("initial state already in target ball");
  const Vec q = semigroup_apply(d, T, y0);
  if (!(q.norm() > target.radius))
    throw ConfigError("target reachable by free dynamics on this horizon");
  Gramian gram = continuous_gramian(d, T);
  NormSolution sol = assemble_solution(d, q, target.radius, gram,
                                       AdjointControl{T, Vec()});
  std::get<AdjointControl>(sol.control).generator = sol.minimizer;
  return sol;
}

NormSolution solve_jp_sampled(const DomainSpec& d, const Vec& y0,
                              const BallTarget& target, const SamplingGrid& grid) {
  if (grid.blocks < 2)
    throw ConfigError("sampled norm problem requires k >= 2 (outside P_{T*})");
  if (!(y0.norm() > target.radius))
    throw ConfigError("initial state already in target ball");
  const Vec q = semigroup_apply(d, grid.horizon(), y0);
  if (!(q.norm() > target.radius))
    throw ConfigError("sampled horizon reaches past the exit time (outside P_{T*})");
  Gramian gram = sampled_gramian(d, grid);
  NormSolution sol = assemble_solution(d, q, target.radius, gram,
                                       SampledControl{grid, {}, true});
  auto& ctrl = std::get<SampledControl>(sol.control);
  ctrl.blocks.resize(grid.blocks);
  for (int i = 1; i <= grid.blocks; ++i)
    ctrl.blocks[i - 1] =
        (block_decay(d, grid, i).array() * sol.minimizer.array()).matrix();
  return sol;
}

Vec SampledControl::coefficients(const DomainSpec& d, int block) const {
  const Vec& w = blocks.at(block - 1);
  return masked ? Vec(d.gram() * w) : w;
}

double control_norm_sq(const DomainSpec& d, const SampledControl& u) {
  double acc = 0.0;
  for (const Vec& w : u.blocks)
    acc += u.masked ? w.dot(d.gram() * w) : w.squaredNorm();
  return acc * u.grid.delta;
}

double control_norm_sq_upto(const DomainSpec& d, const SampledControl& u, double T) {
  double acc = 0.0;
  for (int i = 0; i < u.grid.blocks; ++i) {
    const double lo = i * u.grid.delta;
    const double hi = std::min((i + 1) * u.grid.delta, T);
    if (hi <= lo) break;
    const Vec& w = u.blocks[i];
    acc += (hi - lo) * (u.masked ? w.dot(d.gram() * w) : w.squaredNorm());
  }
  return acc;
}

double cross_inner_upto(const DomainSpec& d, const SampledControl& u,
                        const AdjointControl& v, double T) {
  // <u(t), chi_omega phi(t)> = w_i^T G e^{-Lambda (T_v - t)} z for both
  // masked and plain blocks (the actuator cut-off is idempotent).
  double acc = 0.0;
  for (int i = 0; i < u.grid.blocks; ++i) {
    const double lo = i * u.grid.delta;
    const double hi = std::min((i + 1) * u.grid.delta, T);
    if (hi <= lo) break;
    const Vec e = decay_integral(d, v.horizon, lo, hi);
    acc += u.blocks[i].dot(d.gram() * (e.array() * v.generator.array()).matrix());
  }
  return acc;
}

double control_error(const DomainSpec& d, const SampledControl& u,
                     const AdjointControl& v) {
  const double T = v.horizon;
  if (u.grid.horizon() < T - 1e-12 * T)
    throw ConfigError("sampled control does not cover the comparison horizon");
  const double uu = control_norm_sq_upto(d, u, T);
  const double vv = v.generator.dot(continuous_gramian(d, T).matrix * v.generator);
  const double uv = cross_inner_upto(d, u, v, T);
  return std::sqrt(std::max(0.0, uu + vv - 2.0 * uv));
}

Vec response(const DomainSpec& d, const SampledControl& u) {
  Vec y = Vec::Zero(d.modes());
  for (int i = 1; i <= u.grid.blocks; ++i) {
    const Vec a = block_decay(d, u.grid, i);
    const Vec g = d.gram() * u.blocks[i - 1];
    y += (a.array() * g.array()).matrix();
  }
  return u.grid.delta * y;
}

Vec final_state(const DomainSpec& d, const Vec& y0, const SampledControl& u) {
  return semigroup_apply(d, u.grid.horizon(), y0) + response(d, u);
}

std::pair<SampledControl, double>
l2_approx_null_control(const DomainSpec& d, const Vec& y0,
                       const SamplingGrid& grid, double eps, double cost) {
  if (grid.blocks < 2) throw ConfigError("approximate null control requires k >= 2");
  if (!(eps > 0.0)) throw ConfigError("eps must be positive");
  if (!(cost > 0.0)) throw ConfigError("cost must be positive");

  // Stationarity gives u^i = -(C/eps) G A_i y_T and
  // (I + (C/eps) S) y_T = e^{Delta k delta} y0 with S = delta sum A_i G^2 A_i.
  const Vec q = semigroup_apply(d, grid.horizon(), y0);
  const Mat G2 = d.gram() * d.gram();
  Mat S = Mat::Zero(d.modes(), d.modes());
  for (int i = 1; i <= grid.blocks; ++i) {
    const Vec a = block_decay(d, grid, i);
    S += (a * a.transpose()).cwiseProduct(G2);
  }
  S *= grid.delta;
  Mat A = (cost / eps) * S;
  A.diagonal().array() += 1.0;
  const Vec yT = Eigen::LDLT<Mat>(A).solve(q);

  SampledControl u{grid, {}, false};
  u.blocks.resize(grid.blocks);
  for (int i = 1; i <= grid.blocks; ++i) {
    const Vec a = block_decay(d, grid, i);
    u.blocks[i - 1] = -(cost / eps) * (d.gram() * (a.array() * yT.array()).matrix());
  }
  const double value =
      control_norm_sq(d, u) / cost + final_state(d, y0, u).squaredNorm() / eps;
  return {std::move(u), value};
}

} // namespace heatctl
