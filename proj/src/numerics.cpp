#include "mdce/numerics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <sstream>

#include "mdce/constants.hpp"

namespace mdce {

void Quadrature::validate() const {
  if (!(abs_tol >= 0.0) || !(rel_tol >= 0.0) || (abs_tol == 0.0 && rel_tol == 0.0))
    throw std::invalid_argument("Quadrature: tolerance must be positive");
  if (max_subdivisions < 1)
    throw std::invalid_argument("Quadrature: max_subdivisions must be >= 1");
}

namespace numerics {

namespace {

constexpr double kDuplicationPrecision = 1e-16;

std::string describe(const char* fn, double phi, double m) {
  std::ostringstream os;
  os.precision(17);
  os << fn << "(phi=" << phi << ", m=" << m << ")";
  return os.str();
}

// Integrals over |phi| ≤ π/2; callers handle periodic reduction.
double ellip_f_principal(double phi, double m) {
  const double s = std::sin(phi);
  const double c = std::cos(phi);
  const double y = 1.0 - m * s * s;
  if (!(y > 0.0)) throw DomainError(describe("ellip_f", phi, m) + ": integrand is not real and finite");
  if (s == 0.0) return 0.0;
  return s * carlson_rf(c * c, y, 1.0);
}

double ellip_e_principal(double phi, double m) {
  const double s = std::sin(phi);
  const double c = std::cos(phi);
  const double y = 1.0 - m * s * s;
  if (y < 0.0) throw DomainError(describe("ellip_e", phi, m) + ": integrand is not real");
  if (s == 0.0) return 0.0;
  if (m == 1.0) return s;
  const double s3 = s * s * s;
  return s * carlson_rf(c * c, y, 1.0) - (m / 3.0) * s3 * carlson_rd(c * c, y, 1.0);
}

}  // namespace

double carlson_rf(double x, double y, double z) {
  if (x < 0.0 || y < 0.0 || z < 0.0 || (x == 0.0 && y == 0.0) || (x == 0.0 && z == 0.0) ||
      (y == 0.0 && z == 0.0))
    throw DomainError("carlson_rf: arguments must be non-negative with at most one zero");
  const double a0 = (x + y + z) / 3.0;
  double q = std::pow(3.0 * kDuplicationPrecision, -1.0 / 6.0) *
             std::max({std::abs(a0 - x), std::abs(a0 - y), std::abs(a0 - z)});
  double a = a0;
  double xn = x, yn = y, zn = z;
  double scale = 1.0;  // 4^-n
  while (q * scale > std::abs(a)) {
    const double sx = std::sqrt(xn), sy = std::sqrt(yn), sz = std::sqrt(zn);
    const double lambda = sx * sy + sx * sz + sy * sz;
    a = 0.25 * (a + lambda);
    xn = 0.25 * (xn + lambda);
    yn = 0.25 * (yn + lambda);
    zn = 0.25 * (zn + lambda);
    scale *= 0.25;
  }
  const double dx = (a0 - x) * scale / a;
  const double dy = (a0 - y) * scale / a;
  const double dz = -dx - dy;
  const double e2 = dx * dy - dz * dz;
  const double e3 = dx * dy * dz;
  return (1.0 - e2 / 10.0 + e3 / 14.0 + e2 * e2 / 24.0 - 3.0 * e2 * e3 / 44.0) / std::sqrt(a);
}

double carlson_rd(double x, double y, double z) {
  if (x < 0.0 || y < 0.0 || !(z > 0.0) || (x == 0.0 && y == 0.0))
    throw DomainError("carlson_rd: requires x, y >= 0 (not both zero) and z > 0");
  const double a0 = (x + y + 3.0 * z) / 5.0;
  double q = std::pow(0.25 * kDuplicationPrecision, -1.0 / 6.0) *
             std::max({std::abs(a0 - x), std::abs(a0 - y), std::abs(a0 - z)});
  double a = a0;
  double xn = x, yn = y, zn = z;
  double scale = 1.0;
  double tail = 0.0;
  while (q * scale > std::abs(a)) {
    const double sx = std::sqrt(xn), sy = std::sqrt(yn), sz = std::sqrt(zn);
    const double lambda = sx * sy + sx * sz + sy * sz;
    tail += scale / (sz * (zn + lambda));
    a = 0.25 * (a + lambda);
    xn = 0.25 * (xn + lambda);
    yn = 0.25 * (yn + lambda);
    zn = 0.25 * (zn + lambda);
    scale *= 0.25;
  }
  const double dx = (a0 - x) * scale / a;
  const double dy = (a0 - y) * scale / a;
  const double dz = -(dx + dy) / 3.0;
  const double xy = dx * dy;
  const double z2 = dz * dz;
  const double e2 = xy - 6.0 * z2;
  const double e3 = (3.0 * xy - 8.0 * z2) * dz;
  const double e4 = 3.0 * (xy - z2) * z2;
  const double e5 = xy * z2 * dz;
  const double series = 1.0 - 3.0 * e2 / 14.0 + e3 / 6.0 + 9.0 * e2 * e2 / 88.0 - 3.0 * e4 / 22.0 -
                        9.0 * e2 * e3 / 52.0 + 3.0 * e5 / 26.0;
  return scale * series / (a * std::sqrt(a)) + 3.0 * tail;
}

double ellip_k(double m) {
  if (!(m < 1.0)) throw DomainError(describe("ellip_k", constants::pi / 2, m) + ": requires m < 1");
  return carlson_rf(0.0, 1.0 - m, 1.0);
}

double ellip_e(double m) {
  if (m > 1.0) throw DomainError(describe("ellip_e", constants::pi / 2, m) + ": requires m <= 1");
  if (m == 1.0) return 1.0;
  return carlson_rf(0.0, 1.0 - m, 1.0) - (m / 3.0) * carlson_rd(0.0, 1.0 - m, 1.0);
}

double ellip_f(double phi, double m) {
  if (!std::isfinite(phi) || !std::isfinite(m)) throw DomainError(describe("ellip_f", phi, m));
  if (std::abs(phi) <= constants::pi / 2) return ellip_f_principal(phi, m);
  if (m >= 1.0) throw DomainError(describe("ellip_f", phi, m) + ": integrand singular inside the interval");
  const double periods = std::nearbyint(phi / constants::pi);
  const double rest = phi - periods * constants::pi;
  return 2.0 * periods * ellip_k(m) + ellip_f_principal(rest, m);
}

double ellip_e(double phi, double m) {
  if (!std::isfinite(phi) || !std::isfinite(m)) throw DomainError(describe("ellip_e", phi, m));
  if (std::abs(phi) <= constants::pi / 2) return ellip_e_principal(phi, m);
  if (m > 1.0) throw DomainError(describe("ellip_e", phi, m) + ": integrand becomes imaginary");
  const double periods = std::nearbyint(phi / constants::pi);
  const double rest = phi - periods * constants::pi;
  return 2.0 * periods * ellip_e(m) + ellip_e_principal(rest, m);
}

namespace {

// Gauss–Kronrod 7/15 abscissae and weights on [-1, 1].
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double a, b, value, error, magnitude;
  bool operator<(const Segment& other) const { return error < other.error; }
};

Segment gauss_kronrod(const RealFunction& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  auto eval = [&](double x) {
    const double y = f(x);
    if (!std::isfinite(y)) {
      std::ostringstream os;
      os.precision(17);
      os << "integrate: integrand is not finite at x=" << x;
      throw DomainError(os.str());
    }
    return y;
  };
  const double fc = eval(center);
  double kronrod = kWgk[7] * fc;
  double gauss = kWg[3] * fc;
  double magnitude = kWgk[7] * std::abs(fc);
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    const double f1 = eval(center - dx);
    const double f2 = eval(center + dx);
    kronrod += kWgk[j] * (f1 + f2);
    magnitude += kWgk[j] * (std::abs(f1) + std::abs(f2));
    if (j % 2 == 1) gauss += kWg[j / 2] * (f1 + f2);
  }
  kronrod *= half;
  gauss *= half;
  magnitude *= std::abs(half);
  return {a, b, kronrod, std::abs(kronrod - gauss), magnitude};
}

}  // namespace

double integrate(const RealFunction& f, double a, double b, const Quadrature& q) {
  q.validate();
  if (a == b) return 0.0;
  std::priority_queue<Segment> heap;
  heap.push(gauss_kronrod(f, a, b));
  double value = heap.top().value;
  double error = heap.top().error;
  double magnitude = heap.top().magnitude;
  int subdivisions = 0;
  constexpr double eps = std::numeric_limits<double>::epsilon();
  for (;;) {
    const double target = std::max({q.abs_tol, q.rel_tol * std::abs(value), 50.0 * eps * magnitude});
    if (error <= target) return value;
    if (subdivisions >= q.max_subdivisions) {
      std::ostringstream os;
      os.precision(6);
      os << "integrate: no convergence on [" << a << ", " << b << "] after " << subdivisions
         << " subdivisions (error estimate " << error << ", target " << target << ")";
      throw ConvergenceError(os.str());
    }
    const Segment worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    const Segment left = gauss_kronrod(f, worst.a, mid);
    const Segment right = gauss_kronrod(f, mid, worst.b);
    value += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    magnitude += left.magnitude + right.magnitude - worst.magnitude;
    heap.push(left);
    heap.push(right);
    ++subdivisions;
  }
}

double find_root(const RealFunction& f, double lo, double hi, double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("find_root: tolerance must be positive");
  double a = lo, b = hi;
  double fa = f(a), fb = f(b);
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  if (!(fa * fb < 0.0)) {
    std::ostringstream os;
    os.precision(17);
    os << "find_root: no sign change on [" << lo << ", " << hi << "] (f = " << fa << ", " << fb << ")";
    throw BracketError(os.str());
  }
  constexpr double eps = std::numeric_limits<double>::epsilon();
  double c = a, fc = fa;
  double d = b - a, e = d;
  for (int iter = 0; iter < 2000; ++iter) {
    if ((fb > 0.0) == (fc > 0.0)) {
      c = a;
      fc = fa;
      d = e = b - a;
    }
    if (std::abs(fc) < std::abs(fb)) {
      a = b; b = c; c = a;
      fa = fb; fb = fc; fc = fa;
    }
    const double xtol = 2.0 * eps * std::abs(b) + 0.5 * tol * std::abs(b);
    const double half = 0.5 * (c - b);
    if (std::abs(half) <= xtol || fb == 0.0 || std::abs(half) < std::numeric_limits<double>::min())
      return b;
    if (std::abs(e) >= xtol && std::abs(fa) > std::abs(fb)) {
      // Inverse quadratic interpolation, or secant when only two points are distinct.
      double p, qq;
      const double s = fb / fa;
      if (a == c) {
        p = 2.0 * half * s;
        qq = 1.0 - s;
      } else {
        const double qa = fa / fc;
        const double r = fb / fc;
        p = s * (2.0 * half * qa * (qa - r) - (b - a) * (r - 1.0));
        qq = (qa - 1.0) * (r - 1.0) * (s - 1.0);
      }
      if (p > 0.0) qq = -qq;
      p = std::abs(p);
      if (2.0 * p < std::min(3.0 * half * qq - std::abs(xtol * qq), std::abs(e * qq))) {
        e = d;
        d = p / qq;
      } else {
        d = half;
        e = d;
      }
    } else {
      d = half;
      e = d;
    }
    a = b;
    fa = fb;
    b += (std::abs(d) > xtol) ? d : (half > 0.0 ? xtol : -xtol);
    fb = f(b);
  }
  throw ConvergenceError("find_root: iteration limit reached");
}

double invert_increasing(const RealFunction& f, double target, double lo, double hi, double tol,
                         int max_expansions) {
  if (!(hi > lo)) throw std::invalid_argument("invert_increasing: requires hi > lo");
  auto g = [&](double x) { return f(x) - target; };
  if (g(lo) > 0.0) {
    std::ostringstream os;
    os.precision(17);
    os << "invert_increasing: target " << target << " lies below f(" << lo << ")";
    throw BracketError(os.str());
  }
  double upper = hi;
  for (int k = 0; g(upper) < 0.0; ++k) {
    if (k >= max_expansions || !std::isfinite(upper)) {
      std::ostringstream os;
      os.precision(17);
      os << "invert_increasing: target " << target << " not reached";
      throw BracketError(os.str());
    }
    upper = lo + 2.0 * (upper - lo);
  }
  return find_root(g, lo, upper, tol);
}

}  // namespace numerics

double FourierSeries::operator()(double t) const {
  double value = 0.5 * a0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double phase = static_cast<double>(k + 1) * omega_d * t;
    value += a[k] * std::cos(phase) + b[k] * std::sin(phase);
  }
  return value;
}

double FourierSeries::harmonic_power() const {
  double power = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) power += a[k] * a[k] + b[k] * b[k];
  return power;
}

std::vector<double> FourierSeries::magnitudes() const {
  std::vector<double> out(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) out[k] = std::hypot(a[k], b[k]);
  return out;
}

FourierSeries fourier_decompose(const RealFunction& z, double omega_d, int n_max, int samples) {
  if (!(omega_d > 0.0)) throw std::invalid_argument("fourier_decompose: omega_d must be positive");
  if (n_max < 0) throw std::invalid_argument("fourier_decompose: n_max must be >= 0");
  if (samples < 8 * std::max(n_max, 1))
    throw std::invalid_argument("fourier_decompose: samples must be >= 8 * n_max");

  const auto n = static_cast<std::size_t>(samples);
  const double period = constants::two_pi / omega_d;
  std::vector<double> values(n);
  std::vector<double> cos_table(n), sin_table(n);
  for (std::size_t j = 0; j < n; ++j) {
    values[j] = z(period * static_cast<double>(j) / static_cast<double>(n));
    const double theta = constants::two_pi * static_cast<double>(j) / static_cast<double>(n);
    cos_table[j] = std::cos(theta);
    sin_table[j] = std::sin(theta);
  }

  FourierSeries series;
  series.omega_d = omega_d;
  series.samples = samples;
  series.a.assign(static_cast<std::size_t>(n_max), 0.0);
  series.b.assign(static_cast<std::size_t>(n_max), 0.0);
  const double norm = 2.0 / static_cast<double>(n);
  double sum = 0.0;
  for (double v : values) sum += v;
  series.a0 = norm * sum;
  for (int h = 1; h <= n_max; ++h) {
    double ca = 0.0, cb = 0.0;
    std::size_t index = 0;  // (h * j) mod n
    for (std::size_t j = 0; j < n; ++j) {
      ca += values[j] * cos_table[index];
      cb += values[j] * sin_table[index];
      index += static_cast<std::size_t>(h);
      if (index >= n) index -= n;
    }
    series.a[static_cast<std::size_t>(h - 1)] = norm * ca;
    series.b[static_cast<std::size_t>(h - 1)] = norm * cb;
  }
  if (n_max > 0) {
    const double total = series.harmonic_power();
    const double top = series.a.back() * series.a.back() + series.b.back() * series.b.back();
    series.aliasing_warning = total > 0.0 && top > 0.01 * total;
  }
  return series;
}

}  // namespace mdce
