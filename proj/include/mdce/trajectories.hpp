#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace mdce {

/// A parameter combination that violates a physical constraint (for example a
/// superluminal wall or a drive outside the realizable Josephson range).
class ConstraintViolation : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class TrajectoryKind {
  sinusoidal_motion,        // SM
  sinusoidal_acceleration,  // SA
  alternating_uniform,      // AUA
};

std::string_view to_string(TrajectoryKind kind);
/// Accepts "sm", "sa", "aua" in any letter case.
TrajectoryKind parse_trajectory_kind(std::string_view text);

/// Periodic boundary worldline.
///
/// `A` is the characteristic acceleration parameter: R·omega_d² for SM, the
/// field-strength acceleration α for SA and the uniform acceleration a for
/// AUA. All formulas use the effective light speed `v`.
struct TrajectoryParams {
  TrajectoryKind kind = TrajectoryKind::sinusoidal_motion;
  double A = 0.0;        // m/s²
  double omega_d = 0.0;  // rad/s
  double v = 0.0;        // m/s

  /// Throws ConstraintViolation. SM additionally requires R·omega_d/v ≤ 1 − 1e-9.
  void validate() const;

  [[nodiscard]] double period() const;
  /// SM oscillation amplitude R = A/omega_d². Only meaningful for SM.
  [[nodiscard]] double sm_amplitude() const { return A / (omega_d * omega_d); }
};

inline constexpr double kSubluminalMargin = 1e-9;

struct WorldlineSample {
  double t = 0.0;          // s
  double tau = 0.0;        // s
  double z = 0.0;          // m, centered
  double alpha_dir = 0.0;  // m/s²
};

/// Worldline position before centering (the AUA form carries the v²/a offset).
double raw_position(const TrajectoryParams& p, double t);
/// Coordinate-time mean of raw_position over one period.
double position_offset(const TrajectoryParams& p);
/// raw_position minus position_offset: zero mean over a period.
double position(const TrajectoryParams& p, double t);
/// dz/dt in closed form.
double velocity(const TrajectoryParams& p, double t);
/// Proper acceleration signed by the spatial component of the 4-acceleration.
double directional_acceleration(const TrajectoryParams& p, double t);
/// Proper time elapsed since t = 0. Defined for t ≥ 0.
double proper_time(const TrajectoryParams& p, double t);
/// Proper time elapsed over one coordinate period 2π/omega_d.
double proper_period(const TrajectoryParams& p);

WorldlineSample sample_worldline(const TrajectoryParams& p, double t);

/// Closed-form proper-time average of the proper acceleration over one period.
double average_acceleration(const TrajectoryParams& p);

/// Inverts average_acceleration for A at fixed omega_d and v (ā is strictly
/// increasing in A). Throws ConstraintViolation when the target cannot be
/// reached, which for SM means it would need R·omega_d within 1e-9 of v.
double solve_acceleration_parameter(TrajectoryKind kind, double abar_target, double omega_d,
                                    double v);

/// ā · t_p · 5/(2c): values of order one or larger mark a strongly relativistic motion.
double relativity_estimator(const TrajectoryParams& p);
double relativity_estimator(double abar, double omega_d);

}  // namespace mdce
