#include "doctest.h"

#include <cmath>
#include <sstream>

#include "mdce/circuit.hpp"
#include "mdce/constants.hpp"
#include "oracles.hpp"

using namespace mdce;
using constants::pi;
using constants::two_pi;

namespace {

const CircuitParams kCircuit{};
const double kW18 = two_pi * 18e9;
const double kW146 = two_pi * 14.6e9;

DriveSpectrum single_tone(const CircuitParams& c, double a1_over_a0, double omega_d) {
  DriveSpectrum d;
  d.a0 = 2 * c.static_josephson_energy();
  d.a = {a1_over_a0 * d.a0};
  d.b = {0.0};
  d.omega_d = omega_d;
  return d;
}

}  // namespace

TEST_SUITE("circuit") {

TEST_CASE("derived circuit constants") {
  const auto& c = kCircuit;
  CHECK(c.josephson_energy() == doctest::Approx(c.I_c * constants::flux_quantum / two_pi).epsilon(1e-15));
  CHECK(constants::flux_quantum == doctest::Approx(2.067833848e-15).epsilon(1e-9));
  const double L0 = c.inductance_per_length(), C0 = c.capacitance_per_length();
  CHECK(1.0 / std::sqrt(L0 * C0) == doctest::Approx(c.v).epsilon(1e-14));
  CHECK(std::sqrt(L0 / C0) == doctest::Approx(c.Z0).epsilon(1e-14));
  CHECK_THROWS_AS((CircuitParams{90e-15, 1.25e-6, 55, 0.4 * constants::c, two_pi * 37.3e9, 2.5}.validate()),
                  std::invalid_argument);
  CHECK_THROWS_AS((CircuitParams{90e-15, -1.0, 55, 0.4 * constants::c, two_pi * 37.3e9, 1.3}.validate()),
                  std::invalid_argument);
}

TEST_CASE("effective length") {
  CHECK(effective_length(kCircuit) == doctest::Approx(0.44e-3).epsilon(0.01));
  CircuitParams t3 = kCircuit;
  t3.EJ0_ratio = 0.1002;
  CHECK(effective_length(t3) == doctest::Approx(5.71e-3).epsilon(0.01));
  CHECK(effective_length(t3) == doctest::Approx(effective_length(kCircuit) * 1.3 / 0.1002).epsilon(1e-13));

  auto d = single_tone(kCircuit, 0.125, kW18);
  const double base = effective_length(d, kCircuit);
  CHECK(base == doctest::Approx(effective_length(kCircuit)).epsilon(1e-14));
  d.a0 *= 2;
  CHECK(effective_length(d, kCircuit) == doctest::Approx(base / 2).epsilon(1e-14));

  for (double kappa : {0.5, 3.0}) {
    CircuitParams scaled = kCircuit;
    scaled.I_c *= kappa;
    CHECK(effective_length(scaled) == doctest::Approx(effective_length(kCircuit) / kappa).epsilon(1e-14));
  }
}

TEST_CASE("printed coefficient map equals the displacement map") {
  for (double ratio : {0.1, 0.5, 1.3, 2.0}) {
    CircuitParams c = kCircuit;
    c.EJ0_ratio = ratio;
    CHECK(energy_to_displacement(c) * displacement_to_energy(c) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(energy_to_displacement(c) == doctest::Approx(effective_length(c) / c.static_josephson_energy()).epsilon(1e-14));
  }
}

TEST_CASE("quarter-depth drive gives a quarter effective length") {
  const auto d = single_tone(kCircuit, 0.125, kW18);  // a₁ = (a₀/2)/4
  const double dl = d.a[0] * energy_to_displacement(kCircuit);
  CHECK(dl == doctest::Approx(effective_length(kCircuit) / 4).epsilon(1e-14));
  CHECK(dl == doctest::Approx(0.11e-3).epsilon(0.01));
}

TEST_CASE("linear drive synthesis") {
  const double eps = 0.2;
  const double leff = effective_length(kCircuit);
  const auto z = fourier_decompose([&](double t) { return eps * leff * std::cos(kW18 * t); }, kW18, 3, 256);
  const auto d = drive_from_displacement(z, kCircuit);
  CHECK(d.a[0] == doctest::Approx(eps * kCircuit.static_josephson_energy()).epsilon(1e-12));
  for (int n = 2; n <= 3; ++n) CHECK(std::abs(d.a[n - 1]) < 1e-12 * d.a0);
  for (int n = 1; n <= 3; ++n) CHECK(std::abs(d.b[n - 1]) < 1e-12 * d.a0);
  CHECK(d.a0 == doctest::Approx(2 * kCircuit.static_josephson_energy()).epsilon(1e-15));

  const auto flat = drive_from_displacement(fourier_decompose([](double) { return 0.0; }, kW18, 3, 64), kCircuit);
  CHECK(flat.a0 > 0.0);
  for (int n = 1; n <= 3; ++n) {
    CHECK(flat.a[n - 1] == 0.0);
    CHECK(flat.b[n - 1] == 0.0);
  }

  const auto big = fourier_decompose([&](double t) { return 0.8 * leff * std::cos(kW18 * t); }, kW18, 3, 256);
  CHECK_THROWS_AS(drive_from_displacement(big, kCircuit), RealizabilityError);
}

TEST_CASE("drive from a trajectory has no DC modulation and follows the centered worldline") {
  const TrajectoryParams p{TrajectoryKind::alternating_uniform, 1e18, kW18, kCircuit.v};
  const auto d = trajectory_to_drive(p, kCircuit, 7);
  const auto z = trajectory_series(p, 7);
  CHECK(std::abs(z.a0) < 1e-12 * std::abs(raw_position(p, 0.0)));
  for (int n = 1; n <= 7; ++n)
    CHECK(d.a[n - 1] == doctest::Approx(z.a[n - 1] * displacement_to_energy(kCircuit)).epsilon(1e-14));
}

TEST_CASE("quarter-depth drives at 14.6 GHz are dominated by the first three harmonics") {
  for (const TrajectoryParams& p : {TrajectoryParams{TrajectoryKind::sinusoidal_acceleration, 13.725e18, kW146, kCircuit.v},
                                    TrajectoryParams{TrajectoryKind::alternating_uniform, 20e18, kW146, kCircuit.v}}) {
    const auto c = bias_for_modulation_depth(p, kCircuit);
    const auto d = trajectory_to_drive(p, c, 10);
    const auto mags = d.magnitudes();
    double total = 0.0, first3 = 0.0;
    for (int n = 1; n <= 10; ++n) {
      total += mags[n - 1] * mags[n - 1];
      if (n <= 3) first3 += mags[n - 1] * mags[n - 1];
    }
    CAPTURE(to_string(p.kind));
    CHECK(first3 / total >= 0.99);
    CHECK(mags[2] * 10 < mags[0]);
    // Odd harmonics fall off geometrically; even ones vanish by symmetry.
    CHECK(mags[4] < mags[2]);
    CHECK(mags[6] < mags[4]);
    CHECK(mags[1] < 1e-9 * mags[0]);
  }
}

TEST_CASE("bias from modulation depth") {
  const TrajectoryParams p{TrajectoryKind::sinusoidal_acceleration, 13.725e18, kW146, kCircuit.v};
  const auto c = bias_for_modulation_depth(p, kCircuit, 0.25);
  const auto d = trajectory_to_drive(p, c, 3);
  CHECK(std::hypot(d.a[0], d.b[0]) == doctest::Approx(0.25 * c.static_josephson_energy()).epsilon(1e-12));
  CHECK(c.EJ0_ratio == doctest::Approx(0.1002).epsilon(0.01));
  // |z₁| from an independent quadrature of the worldline.
  const double tp = p.period();
  const double z1c = oracle::gauss_legendre([&](double t) { return position(p, t) * std::cos(kW146 * t); }, 0, tp) * 2 / tp;
  const double z1s = oracle::gauss_legendre([&](double t) { return position(p, t) * std::sin(kW146 * t); }, 0, tp) * 2 / tp;
  CHECK(effective_length(c) == doctest::Approx(std::hypot(z1c, z1s) / 0.25).epsilon(1e-9));
  CHECK_THROWS(bias_for_modulation_depth(p, kCircuit, 0.7));
}

TEST_CASE("external flux") {
  const auto& c = kCircuit;
  DriveSpectrum top;
  top.a0 = 4 * c.josephson_energy();
  top.omega_d = kW18;
  CHECK(external_flux(top, c, 0.0) == 0.0);
  DriveSpectrum zero = top;
  zero.a0 = 0.0;
  CHECK(external_flux(zero, c, 0.0) == doctest::Approx(constants::flux_quantum / 2).epsilon(1e-15));
  DriveSpectrum bias = top;
  bias.a0 = 2 * c.static_josephson_energy();
  const double phi = external_flux(bias, c, 1e-12);
  CHECK(phi == doctest::Approx(constants::flux_quantum * std::acos(0.65) / pi).epsilon(1e-14));
  CHECK(phi / constants::flux_quantum == doctest::Approx(0.2735).epsilon(0.01));

  DriveSpectrum over = top;
  over.a0 *= 1.1;
  try {
    (void)external_flux(over, c, 2e-12);
    FAIL("expected FluxDomainError");
  } catch (const FluxDomainError& e) {
    CHECK(e.time == 2e-12);
    CHECK(e.ratio == doctest::Approx(1.1));
  }
}

TEST_CASE("flux waveform round trip reproduces the drive") {
  const TrajectoryParams p{TrajectoryKind::sinusoidal_acceleration, 13.725e18, kW146, kCircuit.v};
  const auto c = bias_for_modulation_depth(p, kCircuit);
  const auto d = trajectory_to_drive(p, c, 3);
  const int samples = 512;
  const auto wave = flux_waveform(d, c, samples, 2);
  CHECK(wave.size() == 1024);
  const double period = two_pi / d.omega_d;
  // Reconstruct E_J(t) = 2E_J cos(πφ/φ₀) from the sampled flux and project it.
  auto energy = [&](double t) {
    const auto j = static_cast<std::size_t>(std::llround(t / period * samples)) % samples;
    return 2 * c.josephson_energy() * std::cos(pi * wave[j].phi_ext / constants::flux_quantum);
  };
  const auto back = fourier_decompose(energy, d.omega_d, 3, samples);
  CHECK(back.a0 == doctest::Approx(d.a0).epsilon(1e-9));
  for (int n = 1; n <= 3; ++n) {
    CHECK(std::abs(back.a[n - 1] - d.a[n - 1]) <= 1e-6 * std::abs(d.a[0]));
    CHECK(std::abs(back.b[n - 1] - d.b[n - 1]) <= 1e-6 * std::abs(d.a[0]));
  }
  CHECK(wave[samples].phi_ext == doctest::Approx(wave[0].phi_ext).epsilon(1e-12));

  std::ostringstream csv;
  write_flux_csv(csv, wave);
  CHECK(csv.str().rfind("t,phi_ext\n", 0) == 0);
}

TEST_CASE("effective length modulation is linear to first order") {
  const auto& c = kCircuit;
  const double phi = constants::reduced_flux_quantum;
  auto worst_deviation = [&](double eps) {
    auto d = single_tone(c, eps / 2, kW18);  // δE_J = eps·E_J⁰ cos ω_d t
    const double ej0 = 0.5 * d.a0;
    const double leff0 = effective_length(c);
    double worst = 0.0;
    for (int i = 0; i < 256; ++i) {
      const double t = (two_pi / kW18) * i / 256;
      const double ej = d.energy(t);
      const double exact = phi * phi / (c.inductance_per_length() * ej);
      const double linear = leff0 * (1.0 - (ej - ej0) / ej0);
      worst = std::max(worst, std::abs(exact - linear));
    }
    return worst;
  };
  for (double eps : {0.2, 0.1, 0.05}) CHECK(worst_deviation(eps) / worst_deviation(eps / 2) >= 3.5);
}

TEST_CASE("validity report") {
  const auto& c = kCircuit;
  const TrajectoryParams sm{TrajectoryKind::sinusoidal_motion, 0.11e-3 * kW18 * kW18, kW18, c.v};
  const auto d = trajectory_to_drive(sm, c);
  const auto report = validate(d, sm, c);
  for (const char* name : {"subluminal", "ej0_ratio", "plasma", "short_length", "perturbative", "thermal"})
    CHECK(report.find(name) != nullptr);
  CHECK(report.passed());
  CHECK(report.find("subluminal")->status == CheckStatus::ok);
  CHECK(report.find("ej0_ratio")->status == CheckStatus::ok);
  CHECK(report.find("perturbative")->status == CheckStatus::ok);

  TrajectoryParams fast = sm;
  fast.A = 1.01 * c.v * kW18;
  CHECK(validate(d, fast, c).find("subluminal")->status == CheckStatus::fail);

  // R bound at 40 GHz: R < v/ω_d ≈ 0.4775 mm.
  const double w40 = two_pi * 40e9;
  CHECK(c.v / w40 == doctest::Approx(0.4775e-3).epsilon(0.001));
  TrajectoryParams below{TrajectoryKind::sinusoidal_motion, 0.477e-3 * w40 * w40, w40, c.v};
  TrajectoryParams above{TrajectoryKind::sinusoidal_motion, 0.478e-3 * w40 * w40, w40, c.v};
  CHECK(validate(d, below, c).find("subluminal")->status == CheckStatus::ok);
  CHECK(validate(d, above, c).find("subluminal")->status == CheckStatus::fail);

  CircuitParams low = c;
  low.EJ0_ratio = 0.09;
  CHECK(validate(d, sm, low).find("ej0_ratio")->status == CheckStatus::fail);

  DriveSpectrum hot = d;
  hot.omega_d = c.omega_s * 1.01;
  CHECK(validate(hot, sm, c).find("plasma")->status == CheckStatus::fail);
  const double probes[] = {c.omega_s * 1.1};
  CHECK(validate(d, sm, c, probes).find("plasma")->status == CheckStatus::warn);

  CHECK(validate(d, sm, c, {}, 0.3).find("thermal")->status == CheckStatus::warn);
  CHECK(validate(d, sm, c, {}, 0.025).find("thermal")->status == CheckStatus::ok);

  CircuitParams mid = c;
  mid.EJ0_ratio = 1.0;
  auto strong = single_tone(mid, 0.3, kW18);
  CHECK(validate(strong, sm, mid).find("perturbative")->status == CheckStatus::warn);
  strong.a[0] = 0.6 * strong.a0;
  CHECK(validate(strong, sm, mid).find("perturbative")->status == CheckStatus::fail);
  // Within the coefficient bound but pushing E_J(t) past 2E_J.
  auto over = single_tone(c, 0.28, kW18);
  CHECK(validate(over, sm, c).find("perturbative")->status == CheckStatus::fail);

  const double long_probe[] = {c.v / effective_length(c)};
  CHECK(validate(d, sm, c, long_probe).find("short_length")->status == CheckStatus::warn);
}

}  // TEST_SUITE
