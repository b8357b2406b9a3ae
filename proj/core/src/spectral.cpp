#include "heatctl/spectral.hpp"

#include <cmath>
#include <string>

namespace heatctl {

namespace {

// (sin(m*pi*b/L) - sin(m*pi*a/L)) / m, the integral of cos(m*pi*x/L)
// over (a, b) scaled by pi/L.
double sine_increment(int m, double a, double b, double L) {
  const double pi = M_PI;
  return (std::sin(m * pi * b / L) - std::sin(m * pi * a / L)) / m;
}

} // namespace

DomainSpec::DomainSpec(double L, double a, double b, int modes)
    : length_(L), a_(a), b_(b), modes_(modes) {
  if (!(L > 0.0)) throw ConfigError("domain.L: interval length must be positive");
  if (!(a >= 0.0)) throw ConfigError("domain.a: window start must be >= 0");
  if (!(a < b)) throw ConfigError("domain.a/domain.b: window requires a < b");
  if (!(b <= L)) throw ConfigError("domain.b: window end exceeds interval length");
  if (modes < 1) throw ConfigError("domain.J: mode count must be >= 1");

  full_window_ = (a == 0.0 && b == L);

  const double pi = M_PI;
  lambdas_.resize(modes);
  for (int j = 0; j < modes; ++j) {
    const double f = (j + 1) * pi / L;
    lambdas_[j] = f * f;
  }

  // G_ij = \int_a^b (2/L) sin(i pi x/L) sin(j pi x/L) dx, closed form.
  gram_.resize(modes, modes);
  if (full_window_) {
    gram_.setIdentity();
    return;
  }
  for (int i = 0; i < modes; ++i) {
    for (int j = 0; j <= i; ++j) {
      const int mi = i + 1, mj = j + 1;
      double g;
      if (mi == mj) {
        g = (b - a) / L - sine_increment(2 * mi, a, b, L) / (2.0 * pi);
      } else {
        g = (sine_increment(mi - mj, a, b, L) -
             sine_increment(mi + mj, a, b, L)) / pi;
      }
      gram_(i, j) = g;
      gram_(j, i) = g;
    }
  }
}

Vec semigroup_apply(const DomainSpec& d, double t, const Vec& v) {
  if (!(t >= 0.0)) throw ConfigError("semigroup time must be nonnegative");
  if (v.size() != d.modes())
    throw ConfigError("coefficient vector size does not match mode count");
  return (v.array() * (-t * d.lambdas().array()).exp()).matrix();
}

double exit_time(const DomainSpec& d, const Vec& y0, const BallTarget& target) {
  if (y0.size() != d.modes())
    throw ConfigError("y0 size does not match mode count");
  const double r2 = target.radius * target.radius;
  auto excess = [&](double t) {
    return (y0.array().square() * (-2.0 * t * d.lambdas().array()).exp()).sum() - r2;
  };
  if (!(excess(0.0) > 0.0))
    throw ConfigError("initial state already in target ball");

  double lo = 0.0;
  double hi = std::log(2.0) / d.lambda1();
  int guard = 0;
  while (excess(hi) > 0.0) {
    lo = hi;
    hi *= 2.0;
    if (++guard > 200)
      throw NumericalError("exit_time: bracket expansion failed");
  }
  while (hi - lo > 1e-12) {
    const double mid = 0.5 * (lo + hi);
    (excess(mid) > 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

} // namespace heatctl
