#pragma once

#include <numbers>

namespace mdce::constants {

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

// SI 2019 exact values.
inline constexpr double c = 299792458.0;                // m/s
inline constexpr double h = 6.62607015e-34;             // J s
inline constexpr double hbar = h / two_pi;              // J s
inline constexpr double e = 1.602176634e-19;            // C
inline constexpr double k_B = 1.380649e-23;             // J/K
inline constexpr double flux_quantum = h / (2.0 * e);   // Wb, 2.067833848e-15
inline constexpr double reduced_flux_quantum = flux_quantum / two_pi;

}  // namespace mdce::constants
