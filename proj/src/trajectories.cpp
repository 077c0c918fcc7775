#include "mdce/trajectories.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>

#include "mdce/constants.hpp"
#include "mdce/numerics.hpp"

namespace mdce {

namespace {

using constants::pi;
using constants::two_pi;

// Quantities shared by all AUA evaluations. S = sinh(a τ_p / 4v) follows from
// fixing the coordinate period: t_p = 4 (v/a) S.
struct AuaGeometry {
  double a, v, t_p, tau_p, s, c;

  explicit AuaGeometry(const TrajectoryParams& p)
      : a(p.A), v(p.v), t_p(two_pi / p.omega_d) {
    s = a * pi / (2.0 * v * p.omega_d);
    c = std::sqrt(1.0 + s * s);
    tau_p = 4.0 * v / a * std::asinh(s);
  }
};

// Position of t inside its period: t = periods·t_p + rest, rest ∈ [0, t_p).
struct PeriodSplit {
  double periods;
  double rest;
};

PeriodSplit split_period(double t, double t_p) {
  double periods = std::floor(t / t_p);
  double rest = t - periods * t_p;
  if (rest >= t_p) {
    periods += 1.0;
    rest -= t_p;
  } else if (rest < 0.0) {
    periods -= 1.0;
    rest += t_p;
  }
  return {periods, rest};
}

// AUA hyperbolic segment containing `rest`: index 0 is centered on t = 0, 1 on
// t_p/2, 2 on t_p. `u` is the time measured from the segment center.
struct AuaSegment {
  int index;
  double u;
};

AuaSegment aua_segment(const AuaGeometry& g, double rest) {
  if (rest < 0.25 * g.t_p) return {0, rest};
  if (rest < 0.75 * g.t_p) return {1, rest - 0.5 * g.t_p};
  return {2, rest - g.t_p};
}

double sm_beta(const TrajectoryParams& p) { return p.A / (p.omega_d * p.v); }
double sa_k(const TrajectoryParams& p) { return 2.0 * p.A / (p.v * p.omega_d); }

}  // namespace

std::string_view to_string(TrajectoryKind kind) {
  switch (kind) {
    case TrajectoryKind::sinusoidal_motion: return "SM";
    case TrajectoryKind::sinusoidal_acceleration: return "SA";
    case TrajectoryKind::alternating_uniform: return "AUA";
  }
  return "?";
}

TrajectoryKind parse_trajectory_kind(std::string_view text) {
  std::string lower(text);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
  if (lower == "sm") return TrajectoryKind::sinusoidal_motion;
  if (lower == "sa") return TrajectoryKind::sinusoidal_acceleration;
  if (lower == "aua") return TrajectoryKind::alternating_uniform;
  throw std::invalid_argument("unknown trajectory kind '" + std::string(text) + "' (expected sm, sa or aua)");
}

void TrajectoryParams::validate() const {
  std::ostringstream os;
  os.precision(10);
  if (!(A > 0.0) || !std::isfinite(A)) os << "acceleration parameter A must be positive (got " << A << ")";
  else if (!(omega_d > 0.0) || !std::isfinite(omega_d)) os << "omega_d must be positive (got " << omega_d << ")";
  else if (!(v > 0.0) || v > constants::c) os << "v must lie in (0, c] (got " << v << ")";
  else if (kind == TrajectoryKind::sinusoidal_motion && sm_beta(*this) > 1.0 - kSubluminalMargin)
    os << "SM wall speed R*omega_d = " << sm_beta(*this) << " v is not subluminal";
  const std::string message = os.str();
  if (!message.empty()) throw ConstraintViolation(std::string(to_string(kind)) + ": " + message);
}

double TrajectoryParams::period() const { return two_pi / omega_d; }

double raw_position(const TrajectoryParams& p, double t) {
  switch (p.kind) {
    case TrajectoryKind::sinusoidal_motion:
      return -p.sm_amplitude() * std::cos(p.omega_d * t);
    case TrajectoryKind::sinusoidal_acceleration: {
      const double k = sa_k(p);
      return -(p.v / p.omega_d) * std::asin(k * std::cos(p.omega_d * t) / std::sqrt(1.0 + k * k));
    }
    case TrajectoryKind::alternating_uniform: {
      const AuaGeometry g(p);
      const auto seg = aua_segment(g, split_period(t, g.t_p).rest);
      const double hyper = std::hypot(1.0, g.a * seg.u / g.v);
      const double scale = g.v * g.v / g.a;
      return seg.index == 1 ? scale * (2.0 * g.c - hyper) : scale * hyper;
    }
  }
  return 0.0;
}

double position_offset(const TrajectoryParams& p) {
  if (p.kind != TrajectoryKind::alternating_uniform) return 0.0;
  // The two halves of an AUA period are reflections of each other about
  // z = (v²/a) cosh(a τ_p / 4v), so that is the period mean.
  const AuaGeometry g(p);
  return g.v * g.v / g.a * g.c;
}

double position(const TrajectoryParams& p, double t) { return raw_position(p, t) - position_offset(p); }

double velocity(const TrajectoryParams& p, double t) {
  switch (p.kind) {
    case TrajectoryKind::sinusoidal_motion:
      return p.sm_amplitude() * p.omega_d * std::sin(p.omega_d * t);
    case TrajectoryKind::sinusoidal_acceleration: {
      const double k = sa_k(p);
      const double s = std::sin(p.omega_d * t);
      return p.v * k * s / std::sqrt(1.0 + k * k * s * s);
    }
    case TrajectoryKind::alternating_uniform: {
      const AuaGeometry g(p);
      const auto seg = aua_segment(g, split_period(t, g.t_p).rest);
      const double speed = g.a * seg.u / std::hypot(1.0, g.a * seg.u / g.v);
      return seg.index == 1 ? -speed : speed;
    }
  }
  return 0.0;
}

double directional_acceleration(const TrajectoryParams& p, double t) {
  switch (p.kind) {
    case TrajectoryKind::sinusoidal_motion: {
      const double beta = sm_beta(p);
      const double s = std::sin(p.omega_d * t);
      const double gamma_inv2 = 1.0 - beta * beta * s * s;
      return p.A * std::cos(p.omega_d * t) / (gamma_inv2 * std::sqrt(gamma_inv2));
    }
    case TrajectoryKind::sinusoidal_acceleration:
      return 2.0 * p.A * std::cos(p.omega_d * t);
    case TrajectoryKind::alternating_uniform: {
      const AuaGeometry g(p);
      return aua_segment(g, split_period(t, g.t_p).rest).index == 1 ? -p.A : p.A;
    }
  }
  return 0.0;
}

double proper_time(const TrajectoryParams& p, double t) {
  switch (p.kind) {
    case TrajectoryKind::sinusoidal_motion: {
      const double beta = sm_beta(p);
      return numerics::ellip_e(p.omega_d * t, beta * beta) / p.omega_d;
    }
    case TrajectoryKind::sinusoidal_acceleration: {
      const double k = sa_k(p);
      return numerics::ellip_f(p.omega_d * t, -k * k) / p.omega_d;
    }
    case TrajectoryKind::alternating_uniform: {
      // Each hyperbolic segment inverts in closed form: u = (v/a) sinh(a Δτ / v).
      const AuaGeometry g(p);
      const auto split = split_period(t, g.t_p);
      const auto seg = aua_segment(g, split.rest);
      const double local = g.v / g.a * std::asinh(g.a * seg.u / g.v);
      return split.periods * g.tau_p + 0.5 * seg.index * g.tau_p + local;
    }
  }
  return 0.0;
}

double proper_period(const TrajectoryParams& p) {
  switch (p.kind) {
    case TrajectoryKind::sinusoidal_motion: {
      const double beta = sm_beta(p);
      return 4.0 * numerics::ellip_e(beta * beta) / p.omega_d;
    }
    case TrajectoryKind::sinusoidal_acceleration: {
      const double k = sa_k(p);
      return 4.0 * numerics::ellip_k(-k * k) / p.omega_d;
    }
    case TrajectoryKind::alternating_uniform:
      return AuaGeometry(p).tau_p;
  }
  return 0.0;
}

WorldlineSample sample_worldline(const TrajectoryParams& p, double t) {
  return {t, proper_time(p, t), position(p, t), directional_acceleration(p, t)};
}

double average_acceleration(const TrajectoryParams& p) {
  p.validate();
  switch (p.kind) {
    case TrajectoryKind::sinusoidal_motion: {
      const double beta = sm_beta(p);
      return p.v * p.omega_d * std::atanh(beta) / numerics::ellip_e(beta * beta);
    }
    case TrajectoryKind::sinusoidal_acceleration: {
      const double k = sa_k(p);
      return p.v * p.omega_d * std::asinh(k) / numerics::ellip_k(-k * k);
    }
    case TrajectoryKind::alternating_uniform:
      return p.A;
  }
  return 0.0;
}

double solve_acceleration_parameter(TrajectoryKind kind, double abar_target, double omega_d,
                                    double v) {
  if (!(abar_target > 0.0) || !std::isfinite(abar_target))
    throw std::invalid_argument("solve_acceleration_parameter: target must be positive");
  if (!(omega_d > 0.0) || !(v > 0.0))
    throw std::invalid_argument("solve_acceleration_parameter: omega_d and v must be positive");
  constexpr double tol = 1e-14;
  const double scale = v * omega_d;
  switch (kind) {
    case TrajectoryKind::sinusoidal_motion: {
      // ā/(vω) = atanh(β)/E(β²) on β = Rω/v ∈ [0, 1 − margin].
      auto reduced = [](double beta) { return std::atanh(beta) / numerics::ellip_e(beta * beta); };
      const double beta_max = 1.0 - kSubluminalMargin;
      const double target = abar_target / scale;
      if (reduced(beta_max) < target) {
        std::ostringstream os;
        os.precision(6);
        os << "SM: average acceleration " << abar_target << " m/s^2 needs R*omega_d >= v at omega_d = "
           << omega_d << " rad/s";
        throw ConstraintViolation(os.str());
      }
      const double beta = numerics::find_root([&](double b) { return reduced(b) - target; }, 0.0,
                                              beta_max, tol);
      return beta * scale;
    }
    case TrajectoryKind::sinusoidal_acceleration: {
      // ā/(vω) = asinh(k)/K(−k²), k = 2α/(vω); grows without bound in k.
      auto reduced = [](double k) { return std::asinh(k) / numerics::ellip_k(-k * k); };
      const double k = numerics::invert_increasing(reduced, abar_target / scale, 0.0, 1.0, tol);
      return 0.5 * k * scale;
    }
    case TrajectoryKind::alternating_uniform:
      return abar_target;
  }
  return 0.0;
}

double relativity_estimator(double abar, double omega_d) {
  return abar * (two_pi / omega_d) * 5.0 / (2.0 * constants::c);
}

double relativity_estimator(const TrajectoryParams& p) {
  return relativity_estimator(average_acceleration(p), p.omega_d);
}

}  // namespace mdce
