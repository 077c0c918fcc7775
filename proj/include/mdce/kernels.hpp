#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "mdce/scattering.hpp"
#include "mdce/trajectories.hpp"

namespace mdce {

/// `serial` is the reference path; `parallel` distributes independent indices
/// over OpenMP threads. Both produce bitwise identical results.
enum class Execution { serial, parallel };

/// Runs body(i) for i in [0, count). Every index writes only its own output
/// slot, so evaluation order does not matter. If any body throws, the
/// exception from the lowest failing index is rethrown after the loop.
void for_each_index(std::size_t count, Execution exec, const std::function<void(std::size_t)>& body);

/// Thread count for the parallel path. Applies MDCE_THREADS; 0 or unset
/// leaves the OpenMP default.
int configure_threads_from_env();
int max_threads();

/// n_out(ω_i) for every ω in `omegas`.
void spectrum_kernel(std::span<const double> omegas, const DriveSpectrum& d, const CircuitParams& c,
                     const ThermalInput& th, std::span<double> out, Execution exec);

std::vector<double> spectrum_serial(std::span<const double> omegas, const DriveSpectrum& d,
                                    const CircuitParams& c, const ThermalInput& th);
std::vector<double> spectrum_parallel(std::span<const double> omegas, const DriveSpectrum& d,
                                      const CircuitParams& c, const ThermalInput& th);

/// `points` uniform samples of one period starting at t = 0 (end point excluded).
std::vector<WorldlineSample> sample_period(const TrajectoryParams& p, int points, Execution exec);

}  // namespace mdce
