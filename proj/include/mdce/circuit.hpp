#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "mdce/constants.hpp"
#include "mdce/numerics.hpp"
#include "mdce/trajectories.hpp"

namespace mdce {

/// SQUID-terminated coplanar waveguide. Defaults are the DCE experiment
/// values (I_c = 1.25 µA, C_J = 90 fF, Z0 = 55 Ω, v = 0.4c, ω_s/2π = 37.3 GHz,
/// E_J⁰ = 1.3 E_J).
struct CircuitParams {
  double C_J = 90e-15;                                // F
  double I_c = 1.25e-6;                               // A
  double Z0 = 55.0;                                   // Ω
  double v = 0.4 * constants::c;                      // m/s
  double omega_s = constants::two_pi * 37.3e9;        // rad/s
  double EJ0_ratio = 1.3;                             // E_J⁰ / E_J

  void validate() const;

  /// Single-junction Josephson energy E_J = I_c φ₀/2π; the symmetric SQUID spans [0, 2E_J].
  [[nodiscard]] double josephson_energy() const { return I_c * constants::reduced_flux_quantum; }
  /// Static bias E_J⁰ = a₀/2.
  [[nodiscard]] double static_josephson_energy() const { return EJ0_ratio * josephson_energy(); }
  [[nodiscard]] double inductance_per_length() const { return Z0 / v; }
  [[nodiscard]] double capacitance_per_length() const { return 1.0 / (Z0 * v); }
};

/// Fourier decomposition of the Josephson energy,
/// E_J(t) = a0/2 + Σ a_n cos(n ω_d t) + b_n sin(n ω_d t), energies in joules.
struct DriveSpectrum {
  double a0 = 0.0;
  std::vector<double> a;
  std::vector<double> b;
  double omega_d = 0.0;

  [[nodiscard]] int n_max() const { return static_cast<int>(a.size()); }
  [[nodiscard]] double energy(double t) const;
  [[nodiscard]] double modulation(double t) const { return energy(t) - 0.5 * a0; }
  /// |a_n + i b_n| for n = 1..n_max.
  [[nodiscard]] std::vector<double> magnitudes() const;
  /// Largest of |a_n|/a0 and |b_n|/a0.
  [[nodiscard]] double max_relative_coefficient() const;
};

/// Rejected drive: E_J(t) would leave (0, 2E_J] or the modulation depth
/// max|δE_J|/E_J⁰ would exceed kMaxModulationDepth.
class RealizabilityError : public ConstraintViolation {
 public:
  using ConstraintViolation::ConstraintViolation;
};

/// Thrown by external_flux when E_J(t)/2E_J falls outside [0, 1].
class FluxDomainError : public std::domain_error {
 public:
  FluxDomainError(double t, double ratio);
  double time;
  double ratio;
};

inline constexpr double kMaxModulationDepth = 0.5;
inline constexpr int kDefaultHarmonics = 3;
inline constexpr int kDefaultFourierSamples = 4096;

/// L_eff⁰ = (φ₀/2π)² / (L₀ E_J⁰).
double effective_length(const CircuitParams& c);
/// Same quantity expressed through the drive's DC term, (φ₀/2π)² (1/L₀) (2/a₀).
double effective_length(const DriveSpectrum& d, const CircuitParams& c);

/// E_J⁰ / L_eff⁰: converts a wall displacement [m] into a Josephson-energy modulation [J].
double displacement_to_energy(const CircuitParams& c);
/// 4 (φ₀/2π)² / (a₀² L₀): the printed map from drive coefficients [J] to
/// displacement coefficients [m]. Equal to 1 / displacement_to_energy(c).
double energy_to_displacement(const CircuitParams& c);

/// Fourier coefficients of the centered wall position z(t) in metres.
FourierSeries trajectory_series(const TrajectoryParams& p, int n_max = kDefaultHarmonics,
                                int samples = kDefaultFourierSamples);

/// δE_J(t) = (E_J⁰/L_eff⁰) z(t) applied to a displacement series; a0 = 2E_J⁰.
/// Throws RealizabilityError when the reconstructed drive is not realizable.
DriveSpectrum drive_from_displacement(const FourierSeries& z, const CircuitParams& c);

/// Synthesizes the Josephson drive that reproduces the centered trajectory.
DriveSpectrum trajectory_to_drive(const TrajectoryParams& p, const CircuitParams& c,
                                  int n_max = kDefaultHarmonics,
                                  int samples = kDefaultFourierSamples);

/// Returns `c` with EJ0_ratio chosen so that the first drive harmonic has
/// |a₁ + i b₁| = depth · E_J⁰, i.e. L_eff⁰ = |z₁| / depth.
CircuitParams bias_for_modulation_depth(const TrajectoryParams& p, const CircuitParams& c,
                                        double depth = 0.25,
                                        int samples = kDefaultFourierSamples);

/// φ_ext(t) = (φ₀/π) arccos(E_J(t) / 2E_J).
double external_flux(const DriveSpectrum& d, const CircuitParams& c, double t);

struct FluxSample {
  double t;
  double phi_ext;
};

/// `samples_per_period` uniform samples per period over `periods` periods.
std::vector<FluxSample> flux_waveform(const DriveSpectrum& d, const CircuitParams& c,
                                      int samples_per_period, int periods = 1);

/// Two columns `t,phi_ext` (s, Wb) with a header row, 17 significant digits.
void write_flux_csv(std::ostream& out, std::span<const FluxSample> samples);

enum class CheckStatus { ok, warn, fail };
std::string_view to_string(CheckStatus status);

struct ValidityCheck {
  std::string name;
  CheckStatus status = CheckStatus::ok;
  std::string detail;
};

struct ValidityReport {
  std::vector<ValidityCheck> checks;

  /// No check failed (warnings allowed).
  [[nodiscard]] bool passed() const;
  [[nodiscard]] bool clean() const;
  [[nodiscard]] const ValidityCheck* find(std::string_view name) const;
  /// "name: detail" for every non-ok check.
  [[nodiscard]] std::vector<std::string> issues() const;
};

/// Physical validity of a synthesized configuration:
///  subluminal     SM wall speed below v
///  ej0_ratio      E_J⁰/E_J > 0.1 and ≤ 2
///  plasma         ω_d below ω_s (fail); active harmonics or probes above ω_s (warn)
///  short_length   k_ω L_eff⁰ ≪ 1 at the probe frequencies (warn > 0.2);
///                 probes default to ω_d/2
///  perturbative   |a_n|/a₀, |b_n|/a₀ (warn > 0.25, fail > 0.5) and E_J(t) ∈ (0, 2E_J]
///  thermal        k_B T ≪ ħω_d (warn above 0.2)
ValidityReport validate(const DriveSpectrum& d, const TrajectoryParams& p, const CircuitParams& c,
                        std::span<const double> probe_omegas = {}, double temperature = 0.0);

}  // namespace mdce
