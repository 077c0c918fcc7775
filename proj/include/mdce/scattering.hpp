#pragma once

#include <complex>
#include <vector>

#include "mdce/circuit.hpp"

namespace mdce {

struct ThermalInput {
  double T = 0.0;  // K
  void validate() const;
};

/// Bose–Einstein occupation (exp(ħω/k_B T) − 1)⁻¹; zero at T = 0.
double thermal_occupation(double omega, double T);
/// ω · n̄(ω), continuous at ω = 0 where it equals k_B T/ħ.
double weighted_occupation(double omega, double T);

/// Zeroth-order reflection R(ω) = −(1 + i k L)/(1 − i k L), k = ω/v.
std::complex<double> reflection(double omega, double leff, double v);

/// P(ω′, ω″) = (2i L/v) √ω′ √ω″ θ(ω′) θ(ω″).
std::complex<double> pair_kernel(double w1, double w2, double leff, double v);

/// How the ω + nω_d line of the first-order amplitude combines the kernel.
/// `literal` uses P in both the a_n and b_n parts, as printed; `conjugate`
/// uses P* with b_n, following the pattern of the other two lines. Neither
/// enters the vacuum spectrum.
enum class UpConversionForm { literal, conjugate };

struct ConversionAmplitudes {
  int harmonic = 0;
  std::complex<double> down;  // multiplies a_in(ω − nω_d)
  std::complex<double> conj;  // multiplies a_in(nω_d − ω)†, pair creation
  std::complex<double> up;    // multiplies a_in(ω + nω_d)
};

struct ScatterAmplitudes {
  double omega = 0.0;
  std::complex<double> r;
  /// One entry per harmonic with a nonzero coefficient.
  std::vector<ConversionAmplitudes> conv;
};

/// First-order input–output coefficients of a_out(ω).
ScatterAmplitudes scatter_amplitudes(double omega, const DriveSpectrum& d, const CircuitParams& c,
                                     UpConversionForm form = UpConversionForm::literal);

/// Mean output photon number per mode at ω for a thermal input, first order in
/// the drive and neglecting the n̄(ω + nω_d) terms.
double output_spectrum(double omega, const DriveSpectrum& d, const CircuitParams& c,
                       const ThermalInput& th);

/// ħ ω n_out / k_B in kelvin. Only proportional to an effective temperature.
double temperature_estimator(double omega, double n_out);

}  // namespace mdce
