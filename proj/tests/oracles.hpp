// Test-only reference implementations, independent of the library's solver
// paths: adaptive Simpson quadrature, a plain proximal-gradient minimizer,
// golden-section search, and a naive bisection root finder.
#ifndef HEATCTL_TESTS_ORACLES_HPP
#define HEATCTL_TESTS_ORACLES_HPP

#include <Eigen/Dense>

#include <cmath>
#include <functional>

namespace oracles {

inline double simpson(const std::function<double(double)>& f, double a, double b,
                      int panels) {
  const double h = (b - a) / panels;
  double acc = f(a) + f(b);
  for (int i = 1; i < panels; ++i) acc += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return acc * h / 3.0;
}

// Composite 5-point Gauss-Legendre; distinct node set from the library's
// 8-point rule.
inline double gauss5(const std::function<double(double)>& f, double a, double b,
                     int panels) {
  static const double X[5] = {-0.9061798459386640, -0.5384693101056831, 0.0,
                              0.5384693101056831, 0.9061798459386640};
  static const double W[5] = {0.2369268850561891, 0.4786286704993665,
                              0.5688888888888889, 0.4786286704993665,
                              0.2369268850561891};
  const double h = (b - a) / panels;
  double acc = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double lo = a + p * h;
    const double mid = lo + 0.5 * h;
    for (int q = 0; q < 5; ++q) acc += 0.5 * h * W[q] * f(mid + 0.5 * h * X[q]);
  }
  return acc;
}

// Minimizes 1/2 z^T W z + q^T z + r ||z|| by proximal gradient descent.
inline Eigen::VectorXd prox_gradient_min(const Eigen::MatrixXd& W,
                                         const Eigen::VectorXd& q, double r,
                                         const Eigen::VectorXd& start,
                                         int iters = 400000) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(W, Eigen::EigenvaluesOnly);
  const double step = 1.0 / std::max(es.eigenvalues().maxCoeff(), 1e-12);
  Eigen::VectorXd z = start;
  for (int it = 0; it < iters; ++it) {
    Eigen::VectorXd y = z - step * (W * z + q);
    const double yn = y.norm();
    const double shrink = std::max(0.0, 1.0 - step * r / std::max(yn, 1e-300));
    Eigen::VectorXd znext = shrink * y;
    if ((znext - z).norm() < 1e-14) { z = znext; break; }
    z = znext;
  }
  return z;
}

inline double golden_section(const std::function<double(double)>& f, double lo,
                             double hi, double tol = 1e-12) {
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = hi - phi * (hi - lo);
  double d = lo + phi * (hi - lo);
  double fc = f(c), fd = f(d);
  while (hi - lo > tol) {
    if (fc < fd) {
      hi = d; d = c; fd = fc;
      c = hi - phi * (hi - lo);
      fc = f(c);
    } else {
      lo = c; c = d; fc = fd;
      d = lo + phi * (hi - lo);
      fd = f(d);
    }
  }
  return 0.5 * (lo + hi);
}

// Root of a decreasing function on [lo, hi].
inline double bisect_root(const std::function<double(double)>& f, double lo,
                          double hi, double tol = 1e-14) {
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) > 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

} // namespace oracles

#endif
