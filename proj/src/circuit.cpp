#include "mdce/circuit.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>

namespace mdce {

namespace {

std::string format_g(double value, int digits = 6) {
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.*g", digits, value);
  return buffer;
}

// Harmonics whose magnitude is below this fraction of the largest are treated
// as numerically absent (e.g. the even harmonics of every symmetric worldline).
constexpr double kActiveHarmonicFraction = 1e-6;

}  // namespace

void CircuitParams::validate() const {
  auto positive = [](double x) { return x > 0.0 && std::isfinite(x); };
  if (!positive(C_J)) throw ConstraintViolation("circuit: C_J must be positive");
  if (!positive(I_c)) throw ConstraintViolation("circuit: I_c must be positive");
  if (!positive(Z0)) throw ConstraintViolation("circuit: Z0 must be positive");
  if (!positive(v) || v > constants::c) throw ConstraintViolation("circuit: v must lie in (0, c]");
  if (!positive(omega_s)) throw ConstraintViolation("circuit: omega_s must be positive");
  if (!positive(EJ0_ratio) || EJ0_ratio > 2.0)
    throw ConstraintViolation("circuit: EJ0_ratio must lie in (0, 2] (got " + format_g(EJ0_ratio) + ")");
}

double DriveSpectrum::energy(double t) const {
  double value = 0.5 * a0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double phase = static_cast<double>(k + 1) * omega_d * t;
    value += a[k] * std::cos(phase) + b[k] * std::sin(phase);
  }
  return value;
}

std::vector<double> DriveSpectrum::magnitudes() const {
  std::vector<double> out(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) out[k] = std::hypot(a[k], b[k]);
  return out;
}

double DriveSpectrum::max_relative_coefficient() const {
  double worst = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) worst = std::max({worst, std::abs(a[k]), std::abs(b[k])});
  return worst / a0;
}

FluxDomainError::FluxDomainError(double t, double r)
    : std::domain_error("external_flux: E_J(t)/2E_J = " + format_g(r, 17) + " outside [0, 1] at t = " +
                        format_g(t, 17) + " s"),
      time(t),
      ratio(r) {}

double effective_length(const CircuitParams& c) {
  const double phi = constants::reduced_flux_quantum;
  return phi * phi / (c.inductance_per_length() * c.static_josephson_energy());
}

double effective_length(const DriveSpectrum& d, const CircuitParams& c) {
  const double phi = constants::reduced_flux_quantum;
  return phi * phi / c.inductance_per_length() * (2.0 / d.a0);
}

double displacement_to_energy(const CircuitParams& c) {
  return c.static_josephson_energy() / effective_length(c);
}

double energy_to_displacement(const CircuitParams& c) {
  const double a0 = 2.0 * c.static_josephson_energy();
  const double phi = constants::reduced_flux_quantum;
  return 4.0 / (a0 * a0 * c.inductance_per_length()) * phi * phi;
}

FourierSeries trajectory_series(const TrajectoryParams& p, int n_max, int samples) {
  p.validate();
  return fourier_decompose([&p](double t) { return position(p, t); }, p.omega_d, n_max, samples);
}

DriveSpectrum drive_from_displacement(const FourierSeries& z, const CircuitParams& c) {
  c.validate();
  const double scale = displacement_to_energy(c);
  DriveSpectrum d;
  d.a0 = 2.0 * c.static_josephson_energy();
  d.omega_d = z.omega_d;
  d.a.resize(z.a.size());
  d.b.resize(z.b.size());
  for (std::size_t k = 0; k < z.a.size(); ++k) {
    d.a[k] = scale * z.a[k];
    d.b[k] = scale * z.b[k];
  }

  // Realizability of the truncated series actually applied to the SQUID.
  const double ej0 = 0.5 * d.a0;
  const double ej_max = 2.0 * c.josephson_energy();
  const int grid = std::max(z.samples, 64);
  const double period = constants::two_pi / d.omega_d;
  for (int j = 0; j < grid; ++j) {
    const double t = period * j / grid;
    const double energy = d.energy(t);
    const double depth = std::abs(energy - ej0) / ej0;
    if (depth > kMaxModulationDepth || !(energy > 0.0) || energy > ej_max) {
      throw RealizabilityError("drive not realizable at t = " + format_g(t) + " s: E_J(t)/E_J = " +
                               format_g(energy / c.josephson_energy()) + ", |dE_J|/E_J0 = " +
                               format_g(depth) + " (limit " + format_g(kMaxModulationDepth) + ")");
    }
  }
  return d;
}

DriveSpectrum trajectory_to_drive(const TrajectoryParams& p, const CircuitParams& c, int n_max,
                                  int samples) {
  return drive_from_displacement(trajectory_series(p, n_max, samples), c);
}

CircuitParams bias_for_modulation_depth(const TrajectoryParams& p, const CircuitParams& c,
                                        double depth, int samples) {
  if (!(depth > 0.0) || depth > kMaxModulationDepth)
    throw std::invalid_argument("bias_for_modulation_depth: depth must lie in (0, 0.5]");
  const FourierSeries z = trajectory_series(p, 1, std::max(samples, 8));
  const double first = std::hypot(z.a[0], z.b[0]);
  if (!(first > 0.0)) throw ConstraintViolation("bias_for_modulation_depth: trajectory has no first harmonic");
  // L_eff⁰ = |z₁|/depth and L_eff⁰ = (φ₀/2π)² / (L₀ E_J⁰).
  const double phi = constants::reduced_flux_quantum;
  const double leff = first / depth;
  CircuitParams out = c;
  out.EJ0_ratio = phi * phi / (c.inductance_per_length() * leff) / c.josephson_energy();
  return out;
}

double external_flux(const DriveSpectrum& d, const CircuitParams& c, double t) {
  const double ratio = d.energy(t) / (2.0 * c.josephson_energy());
  if (!(ratio >= 0.0 && ratio <= 1.0)) throw FluxDomainError(t, ratio);
  return constants::flux_quantum / constants::pi * std::acos(ratio);
}

std::vector<FluxSample> flux_waveform(const DriveSpectrum& d, const CircuitParams& c,
                                      int samples_per_period, int periods) {
  if (samples_per_period < 2 || periods < 1)
    throw std::invalid_argument("flux_waveform: need >= 2 samples per period and >= 1 period");
  const double period = constants::two_pi / d.omega_d;
  const int total = samples_per_period * periods;
  std::vector<FluxSample> out;
  out.reserve(static_cast<std::size_t>(total));
  for (int j = 0; j < total; ++j) {
    const double t = period * static_cast<double>(j) / samples_per_period;
    out.push_back({t, external_flux(d, c, t)});
  }
  return out;
}

void write_flux_csv(std::ostream& out, std::span<const FluxSample> samples) {
  out << "t,phi_ext\n";
  char line[96];
  for (const auto& s : samples) {
    std::snprintf(line, sizeof line, "%.17g,%.17g\n", s.t, s.phi_ext);
    out << line;
  }
}

std::string_view to_string(CheckStatus status) {
  switch (status) {
    case CheckStatus::ok: return "ok";
    case CheckStatus::warn: return "warn";
    case CheckStatus::fail: return "fail";
  }
  return "?";
}

bool ValidityReport::passed() const {
  return std::none_of(checks.begin(), checks.end(),
                      [](const ValidityCheck& c) { return c.status == CheckStatus::fail; });
}

bool ValidityReport::clean() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const ValidityCheck& c) { return c.status == CheckStatus::ok; });
}

const ValidityCheck* ValidityReport::find(std::string_view name) const {
  for (const auto& c : checks)
    if (c.name == name) return &c;
  return nullptr;
}

std::vector<std::string> ValidityReport::issues() const {
  std::vector<std::string> out;
  for (const auto& c : checks)
    if (c.status != CheckStatus::ok) out.push_back(c.name + " [" + std::string(to_string(c.status)) + "]: " + c.detail);
  return out;
}

ValidityReport validate(const DriveSpectrum& d, const TrajectoryParams& p, const CircuitParams& c,
                        std::span<const double> probe_omegas, double temperature) {
  ValidityReport report;
  auto add = [&](std::string name, CheckStatus status, std::string detail) {
    report.checks.push_back({std::move(name), status, std::move(detail)});
  };

  // (i) subluminal wall
  if (p.kind == TrajectoryKind::sinusoidal_motion) {
    const double beta = p.A / (p.omega_d * p.v);
    add("subluminal", beta < 1.0 - kSubluminalMargin ? CheckStatus::ok : CheckStatus::fail,
        "R*omega_d/v = " + format_g(beta));
  } else {
    add("subluminal", CheckStatus::ok, std::string(to_string(p.kind)) + " is subluminal for every A");
  }

  // (ii) static bias
  {
    const bool ok = c.EJ0_ratio > 0.1 && c.EJ0_ratio <= 2.0;
    add("ej0_ratio", ok ? CheckStatus::ok : CheckStatus::fail, "E_J0/E_J = " + format_g(c.EJ0_ratio));
  }

  // (iii) plasma frequency
  {
    CheckStatus status = CheckStatus::ok;
    std::string detail = "omega_d/omega_s = " + format_g(d.omega_d / c.omega_s);
    if (d.omega_d >= c.omega_s) status = CheckStatus::fail;
    const auto mags = d.magnitudes();
    const double largest = mags.empty() ? 0.0 : *std::max_element(mags.begin(), mags.end());
    for (std::size_t k = 0; k < mags.size(); ++k) {
      const double harmonic = static_cast<double>(k + 1) * d.omega_d;
      if (mags[k] > kActiveHarmonicFraction * largest && harmonic >= c.omega_s) {
        if (status == CheckStatus::ok) status = CheckStatus::warn;
        detail += "; harmonic " + std::to_string(k + 1) + " above omega_s";
      }
    }
    for (double w : probe_omegas) {
      if (w >= c.omega_s) {
        if (status == CheckStatus::ok) status = CheckStatus::warn;
        detail += "; probe " + format_g(w) + " rad/s above omega_s";
      }
    }
    add("plasma", status, detail);
  }

  // (iv) short effective length
  {
    const double leff = effective_length(d, c);
    double worst = 0.0;
    if (probe_omegas.empty()) {
      worst = 0.5 * d.omega_d / c.v * leff;
    } else {
      for (double w : probe_omegas) worst = std::max(worst, std::abs(w) / c.v * leff);
    }
    const CheckStatus status = worst > 0.2 ? CheckStatus::warn : CheckStatus::ok;
    add("short_length", status, "max k*L_eff0 = " + format_g(worst));
  }

  // (v) perturbative smallness and realizable E_J(t)
  {
    const double rel = d.n_max() > 0 ? d.max_relative_coefficient() : 0.0;
    CheckStatus status = rel > 0.5 ? CheckStatus::fail : rel > 0.25 ? CheckStatus::warn : CheckStatus::ok;
    std::string detail = "max |a_n|/a0, |b_n|/a0 = " + format_g(rel);
    const double ej_max = 2.0 * c.josephson_energy();
    const double period = constants::two_pi / d.omega_d;
    double lo = d.energy(0.0), hi = lo;
    for (int j = 1; j < 1024; ++j) {
      const double e = d.energy(period * j / 1024.0);
      lo = std::min(lo, e);
      hi = std::max(hi, e);
    }
    if (!(lo > 0.0) || hi > ej_max) {
      status = CheckStatus::fail;
      detail += "; E_J(t)/E_J spans [" + format_g(lo / c.josephson_energy()) + ", " +
                format_g(hi / c.josephson_energy()) + "]";
    }
    add("perturbative", status, detail);
  }

  // (vi) cold bath
  {
    const double ratio = constants::k_B * temperature / (constants::hbar * d.omega_d);
    add("thermal", ratio > 0.2 ? CheckStatus::warn : CheckStatus::ok, "k_B T/(hbar omega_d) = " + format_g(ratio));
  }
  return report;
}

}  // namespace mdce
