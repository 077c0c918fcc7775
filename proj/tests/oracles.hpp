#pragma once

// Reference computations used only by the tests. They deliberately avoid the
// library's own quadrature and root finder.

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <initializer_list>
#include <vector>

#include "mdce/constants.hpp"
#include "mdce/trajectories.hpp"

namespace oracle {

/// Composite 5-point Gauss–Legendre rule on `panels` equal panels.
inline double gauss_legendre(const std::function<double(double)>& f, double a, double b, int panels = 4000) {
  static constexpr std::array<double, 5> x = {0.0, -0.5384693101056831, 0.5384693101056831, -0.9061798459386640,
                                              0.9061798459386640};
  static constexpr std::array<double, 5> w = {0.5688888888888889, 0.4786286704993665, 0.4786286704993665,
                                              0.2369268850561891, 0.2369268850561891};
  const double h = (b - a) / panels;
  double sum = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double mid = a + (p + 0.5) * h;
    double s = 0.0;
    for (std::size_t k = 0; k < 5; ++k) s += w[k] * f(mid + 0.5 * h * x[k]);
    sum += 0.5 * h * s;
  }
  return sum;
}

/// Gauss–Legendre over consecutive breakpoints.
inline double gauss_legendre_split(const std::function<double(double)>& f, const std::vector<double>& cuts,
                                   int panels = 4000) {
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) sum += gauss_legendre(f, cuts[i], cuts[i + 1], panels);
  return sum;
}

/// Plain bisection; f(lo) and f(hi) must differ in sign.
inline double bisect(const std::function<double(double)>& f, double lo, double hi, int iterations = 200) {
  double flo = f(lo);
  for (int i = 0; i < iterations; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

/// Proper-time average of |α| over one period, ∫|α| dτ / ∫ dτ, with
/// dτ/dt = √(1 − (dz/dt)²/v²) and the period split where α jumps.
inline double average_acceleration(const mdce::TrajectoryParams& p) {
  const double tp = mdce::constants::two_pi / p.omega_d;
  std::vector<double> cuts{0.0, tp};
  if (p.kind == mdce::TrajectoryKind::alternating_uniform) cuts = {0.0, tp / 4, 3 * tp / 4, tp};
  auto dtau = [&](double t) {
    const double beta = mdce::velocity(p, t) / p.v;
    return std::sqrt(1.0 - beta * beta);
  };
  const double num =
      gauss_legendre_split([&](double t) { return std::abs(mdce::directional_acceleration(p, t)) * dtau(t); }, cuts);
  const double den = gauss_legendre_split(dtau, cuts);
  return num / den;
}

/// ∫₀^φ √(1 − m sin²θ) dθ and ∫₀^φ dθ/√(1 − m sin²θ) by Gauss–Legendre.
inline double elliptic_e(double phi, double m) {
  return gauss_legendre([m](double t) { return std::sqrt(1.0 - m * std::sin(t) * std::sin(t)); }, 0.0, phi);
}
inline double elliptic_f(double phi, double m) {
  return gauss_legendre([m](double t) { return 1.0 / std::sqrt(1.0 - m * std::sin(t) * std::sin(t)); }, 0.0, phi);
}

inline double rel_diff(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

}  // namespace oracle
