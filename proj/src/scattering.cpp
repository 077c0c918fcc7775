#include "mdce/scattering.hpp"

#include <cmath>
#include <stdexcept>

namespace mdce {

namespace {
constexpr std::complex<double> I{0.0, 1.0};
}

void ThermalInput::validate() const {
  if (!(T >= 0.0) || !std::isfinite(T)) throw std::invalid_argument("thermal input: T must be >= 0");
}

double thermal_occupation(double omega, double T) {
  if (T == 0.0) return 0.0;
  return 1.0 / std::expm1(constants::hbar * omega / (constants::k_B * T));
}

double weighted_occupation(double omega, double T) {
  if (T == 0.0) return 0.0;
  const double kt_over_hbar = constants::k_B * T / constants::hbar;
  if (omega == 0.0) return kt_over_hbar;
  return omega / std::expm1(omega / kt_over_hbar);
}

std::complex<double> reflection(double omega, double leff, double v) {
  const double kl = std::abs(omega) / v * leff;
  return -(1.0 + I * kl) / (1.0 - I * kl);
}

std::complex<double> pair_kernel(double w1, double w2, double leff, double v) {
  if (!(w1 > 0.0) || !(w2 > 0.0)) return 0.0;
  return 2.0 * I * leff / v * std::sqrt(w1) * std::sqrt(w2);
}

ScatterAmplitudes scatter_amplitudes(double omega, const DriveSpectrum& d, const CircuitParams& c,
                                     UpConversionForm form) {
  const double leff = effective_length(d, c);
  const double v = c.v;
  auto k = [v](double w) { return std::abs(w) / v; };

  ScatterAmplitudes out;
  out.omega = omega;
  out.r = reflection(omega, leff, v);
  for (int n = 1; n <= d.n_max(); ++n) {
    const double an = d.a[static_cast<std::size_t>(n - 1)] / d.a0;
    const double bn = d.b[static_cast<std::size_t>(n - 1)] / d.a0;
    if (an == 0.0 && bn == 0.0) continue;
    const double nw = n * d.omega_d;

    ConversionAmplitudes amp;
    amp.harmonic = n;

    const double w_down = omega - nw;
    const auto p_down = pair_kernel(omega, w_down, leff, v);
    amp.down = (an * p_down - I * bn * std::conj(p_down)) *
               std::exp(I * (k(omega) + k(w_down)) * leff);

    const double w_pair = nw - omega;
    const auto p_pair = pair_kernel(omega, w_pair, leff, v);
    amp.conj = (an * std::conj(p_pair) - I * bn * p_pair) *
               std::exp(I * (k(omega) - k(w_pair)) * leff);

    const double w_up = omega + nw;
    const auto p_up = pair_kernel(omega, w_up, leff, v);
    const auto p_up_b = form == UpConversionForm::literal ? p_up : std::conj(p_up);
    amp.up = (an * p_up - I * bn * p_up_b) * std::exp(I * (k(omega) + k(w_up)) * leff);

    out.conv.push_back(amp);
  }
  return out;
}

double output_spectrum(double omega, const DriveSpectrum& d, const CircuitParams& c,
                       const ThermalInput& th) {
  const double leff = effective_length(d, c);
  const double v = c.v;
  const double r2 = std::norm(reflection(omega, leff, v));
  double sum = 0.0;
  for (int n = 1; n <= d.n_max(); ++n) {
    const double an = d.a[static_cast<std::size_t>(n - 1)];
    const double bn = d.b[static_cast<std::size_t>(n - 1)];
    const double weight = an * an + bn * bn;  // |a_n + i b_n|² for real coefficients
    if (weight == 0.0) continue;
    const double nw = n * d.omega_d;
    // ω |ω − nω_d| n̄(|ω − nω_d|) → ω k_B T/ħ at the degenerate point.
    const double stimulated = omega * weighted_occupation(std::abs(omega - nw), th.T);
    const double spontaneous = nw > omega ? omega * (nw - omega) : 0.0;
    sum += weight * (stimulated + spontaneous);
  }
  const double prefactor = 4.0 * leff * leff / (v * v * d.a0 * d.a0);
  return r2 * thermal_occupation(omega, th.T) + prefactor * sum;
}

double temperature_estimator(double omega, double n_out) {
  return constants::hbar * omega * n_out / constants::k_B;
}

}  // namespace mdce
