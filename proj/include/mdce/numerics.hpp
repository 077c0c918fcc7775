#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace mdce {

/// Thrown when a special function is evaluated outside its real domain.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Thrown when an iterative method fails to meet its tolerance.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Thrown by find_root when the bracket does not contain a sign change.
class BracketError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

using RealFunction = std::function<double(double)>;

struct Quadrature {
  double abs_tol = 0.0;
  double rel_tol = 1e-12;
  int max_subdivisions = 2000;

  void validate() const;
};

namespace numerics {

// Carlson symmetric integrals (duplication algorithm).
double carlson_rf(double x, double y, double z);
double carlson_rd(double x, double y, double z);

/// Incomplete elliptic integral of the first kind, F(phi | m) = ∫₀^φ dθ / √(1 − m sin²θ).
///
/// Parameter convention (m, not the modulus k). Negative m is allowed. For
/// m ≤ 1 any real phi is accepted and the integral is extended with
/// F(φ + π, m) = F(φ, m) + 2K(m). For m > 1 only |φ| < asin(1/√m) is real.
double ellip_f(double phi, double m);

/// Incomplete elliptic integral of the second kind, E(phi | m) = ∫₀^φ √(1 − m sin²θ) dθ.
/// Same conventions as ellip_f; E(φ + π, m) = E(φ, m) + 2E(m).
double ellip_e(double phi, double m);

double ellip_k(double m);  // complete, = ellip_f(π/2, m)
double ellip_e(double m);  // complete, = ellip_e(π/2, m)

/// Adaptive Gauss–Kronrod (7/15) quadrature with global error control.
/// Converged when the summed error estimate is below max(abs_tol, rel_tol·|I|).
double integrate(const RealFunction& f, double a, double b, const Quadrature& q = {});

/// Brent's bracketed root finder. Requires f(lo)·f(hi) ≤ 0.
/// Terminates when the bracket is narrower than tol·max(1, |x|) or f(x) == 0.
double find_root(const RealFunction& f, double lo, double hi, double tol = 1e-12);

/// Solves f(x) = target for a monotonically increasing f on [lo, +∞).
/// The upper end of the bracket starts at hi and is doubled until it encloses
/// the target, up to max_expansions times.
double invert_increasing(const RealFunction& f, double target, double lo, double hi,
                         double tol = 1e-12, int max_expansions = 200);

}  // namespace numerics

/// Real trigonometric series  a0/2 + Σ a_n cos(n ω t) + b_n sin(n ω t).
struct FourierSeries {
  double a0 = 0.0;
  std::vector<double> a;  // a[n-1] multiplies cos(n ω t)
  std::vector<double> b;  // b[n-1] multiplies sin(n ω t)
  double omega_d = 0.0;
  int samples = 0;
  /// Set when the highest requested harmonic carries more than 1% of the
  /// harmonic power, i.e. the truncation is probably too short.
  bool aliasing_warning = false;

  [[nodiscard]] int n_max() const { return static_cast<int>(a.size()); }
  [[nodiscard]] double operator()(double t) const;
  /// Σ (a_n² + b_n²) over n ≥ 1.
  [[nodiscard]] double harmonic_power() const;
  /// |a_n + i b_n| for n = 1..n_max.
  [[nodiscard]] std::vector<double> magnitudes() const;
};

/// Projects a 2π/omega_d-periodic signal onto its first n_max harmonics with
/// the composite trapezoid rule on `samples` uniform points.
FourierSeries fourier_decompose(const RealFunction& z, double omega_d, int n_max,
                                int samples = 4096);

}  // namespace mdce
