#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mdce/circuit.hpp"
#include "mdce/kernels.hpp"
#include "mdce/scattering.hpp"
#include "mdce/trajectories.hpp"

namespace mdce {

// ---------------------------------------------------------------------------
// Parameter selection
// ---------------------------------------------------------------------------

/// Requirements for choosing (A, ω_d):
///  1. every trajectory reaches the same average acceleration abar_target at a
///     shared driving frequency;
///  2. the static bias implied by the fixed first-harmonic modulation depth
///     (|a₁| = depth·E_J⁰) stays above ejo_ratio_min, and the SM amplitude
///     stays subluminal up to omega_d_max;
///  3. ā/ω_d is maximal, i.e. ω_d is the smallest feasible frequency.
struct SelectionCriteria {
  double abar_target = 20e18;                      // m/s²
  double ejo_ratio_min = 0.1;
  double omega_d_max = constants::two_pi * 40e9;   // rad/s, highest driving frequency considered
  double modulation_depth = 0.25;                  // a₁ / E_J⁰

  void validate() const;
};

struct SelectedTrajectory {
  TrajectoryParams params;
  double abar = 0.0;
  double EJ0_ratio = 0.0;
  double first_harmonic = 0.0;  // |z₁| in metres
};

struct Selection {
  double omega_d = 0.0;
  /// Upper end of the admissible driving band: min(omega_d_max, ω_s).
  double omega_d_upper = 0.0;
  std::vector<SelectedTrajectory> trajectories;
  /// SM only: amplitude R needed at omega_d_upper and at omega_d.
  std::optional<std::pair<double, double>> sm_amplitude_range;
};

/// Throws ConstraintViolation when no driving frequency in the band is feasible.
Selection select_parameters(std::span<const TrajectoryKind> kinds, const SelectionCriteria& crit,
                            const CircuitParams& c);
Selection select_parameters(TrajectoryKind kind, const SelectionCriteria& crit, const CircuitParams& c);

// ---------------------------------------------------------------------------
// Sweeps
// ---------------------------------------------------------------------------

enum class SweepAxis { omega, omega_d, abar };
enum class FigureId { worldlines, fourier, nout_vs_w_T, nout_vs_w, nout_vs_wd, nout_vs_abar, compare3_w, compare3_abar };

std::string_view to_string(SweepAxis axis);
SweepAxis parse_sweep_axis(std::string_view text);
std::string_view to_string(FigureId id);
/// "fig1".."fig8" or the figure identifier itself.
FigureId parse_figure(std::string_view text);
int figure_number(FigureId id);

struct Grid {
  double min = 0.0;
  double max = 0.0;
  int points = 401;
  /// Open grids exclude both end points: x_i = min + (max − min)(i + 1)/(points + 1).
  bool open = false;

  void validate() const;
  [[nodiscard]] std::vector<double> values() const;
};

/// Average acceleration used at a driving frequency: either the constant
/// `abar`, or the one produced by a reference trajectory with a fixed
/// acceleration parameter.
struct AccelerationSpec {
  double abar = 0.0;
  std::optional<TrajectoryKind> reference_kind;
  double reference_A = 0.0;

  [[nodiscard]] double at(double omega_d, double v) const;
};

struct SweepSpec {
  FigureId figure = FigureId::nout_vs_w;
  SweepAxis axis = SweepAxis::omega;
  /// Axis omega: ω/ω_d when grid_relative, otherwise rad/s. Axis omega_d: rad/s.
  /// Axis abar: m/s².
  Grid grid;
  bool grid_relative = false;
  /// Fixed value per panel: ω_d for axis omega, ω for the other axes [rad/s].
  std::vector<double> panels;
  /// Driving frequency for axis abar [rad/s].
  double omega_d = 0.0;
  std::vector<TrajectoryKind> trajectories;
  std::vector<double> temperatures{0.0};
  AccelerationSpec acceleration;
  /// When > 0 the static bias is re-chosen per configuration so that
  /// |a₁| = depth·E_J⁰; when 0 the circuit EJ0_ratio is used as given.
  double modulation_depth = 0.25;
  int n_max = kDefaultHarmonics;
  int samples = kDefaultFourierSamples;

  void validate() const;
};

/// Named presets matching the figure-level parameter sets.
SweepSpec preset_sweep(FigureId id);

struct SpectrumPoint {
  double x = 0.0;
  double n_out = 0.0;
};

using Metadata = std::vector<std::pair<std::string, std::string>>;

/// One curve: n_out against the sweep axis for one (panel, trajectory, temperature).
struct SpectrumDataset {
  SweepAxis axis = SweepAxis::omega;
  std::string trajectory;
  double temperature = 0.0;
  std::vector<SpectrumPoint> points;
  Metadata metadata;

  [[nodiscard]] std::optional<std::string> meta(std::string_view key) const;
};

struct SweepResult {
  SweepSpec spec;
  /// Ordered by panel, then trajectory, then temperature.
  std::vector<SpectrumDataset> curves;
  [[nodiscard]] std::size_t panel_of(std::size_t curve) const;
};

/// Drive configuration used for one (trajectory, ω_d, ā) combination of a sweep.
struct SweepConfiguration {
  TrajectoryParams params;
  CircuitParams circuit;
  DriveSpectrum drive;
};

/// Rebuilds the trajectory (solving for A), bias and drive the sweep uses.
SweepConfiguration configure(const SweepSpec& s, const CircuitParams& c, TrajectoryKind kind,
                             double omega_d, double abar);

/// Evaluates every grid point. Per-point failures are listed in the curve
/// metadata as failure.<index> and the point is left out.
SweepResult run_sweep(const SweepSpec& s, const CircuitParams& c, Execution exec = Execution::parallel);

// ---------------------------------------------------------------------------
// Worldline and Fourier datasets
// ---------------------------------------------------------------------------

struct WorldlineCurve {
  TrajectoryParams params;
  std::vector<WorldlineSample> samples;
};

/// One period of z(t) and α(t) for each kind at matched ā and ω_d.
std::vector<WorldlineCurve> worldline_dataset(std::span<const TrajectoryKind> kinds, double abar,
                                              double omega_d, double v, int points,
                                              Execution exec = Execution::parallel);

struct FourierCurve {
  TrajectoryParams params;
  CircuitParams circuit;
  DriveSpectrum drive;
};

/// Drive coefficients for each kind at matched ā and ω_d, bias from the modulation-depth rule.
std::vector<FourierCurve> fourier_dataset(std::span<const TrajectoryKind> kinds, double abar,
                                          double omega_d, const CircuitParams& c, int n_max,
                                          double modulation_depth = 0.25,
                                          int samples = kDefaultFourierSamples);

}  // namespace mdce
