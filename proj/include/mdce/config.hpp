#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "mdce/circuit.hpp"
#include "mdce/experiments.hpp"
#include "mdce/trajectories.hpp"

namespace mdce {

/// Configuration problem, located by document line (1-based, 0 when the
/// value did not come from a document) and dotted field name.
class ConfigError : public std::invalid_argument {
 public:
  ConfigError(int line, std::string field, const std::string& message);
  int line;
  std::string field;
};

enum class Command { traj, drive, flux, spectrum, sweep, params, reproduce };
std::string_view to_string(Command c);
Command parse_command(std::string_view text);

enum class OutputFormat { split, long_table };
OutputFormat parse_output_format(std::string_view text);

/// Frequencies in configuration documents are linear (Hz).
struct TrajectoryBlock {
  std::optional<TrajectoryKind> kind;
  std::optional<double> A;            // m/s²
  std::optional<double> abar_target;  // m/s²
  std::optional<double> f_d;          // Hz
};

struct PhysicsBlock {
  double T = 0.0;  // K
  int n_max = kDefaultHarmonics;
  int samples = kDefaultFourierSamples;
  /// Re-bias so that |a₁| = depth·E_J⁰; excludes circuit.EJ0_ratio.
  std::optional<double> modulation_depth;
};

struct SweepBlock {
  std::optional<SweepAxis> axis;
  std::optional<double> min;
  std::optional<double> max;
  int points = 401;
  /// Axis omega only: min/max in units of ω_d.
  bool relative = false;
  std::optional<bool> open;
  /// Panel values: f_d [Hz] for axis omega, f [Hz] otherwise.
  std::vector<double> fixed;
  std::vector<double> temperatures;
  std::vector<TrajectoryKind> trajectories;
};

struct FluxBlock {
  int samples_per_period = 256;
  int periods = 1;
};

struct OutputBlock {
  std::optional<std::string> path;
  OutputFormat format = OutputFormat::split;
};

struct RunConfig {
  std::optional<Command> command;
  std::optional<FigureId> figure;
  TrajectoryBlock trajectory;
  CircuitParams circuit;
  bool ej0_ratio_set = false;
  PhysicsBlock physics;
  SweepBlock sweep;
  FluxBlock flux;
  OutputBlock output;

  /// Structural checks: positivity, A/abar exclusivity, bias exclusivity.
  void validate() const;
  /// Requires kind, f_d and exactly one of A / abar_target; solves A from ā.
  [[nodiscard]] TrajectoryParams resolve_trajectory() const;
  /// Circuit with the bias rule applied for `p`.
  [[nodiscard]] CircuitParams resolve_circuit(const TrajectoryParams& p) const;
};

/// Parses a YAML document. Unset circuit fields keep their defaults.
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::string& path);

}  // namespace mdce
