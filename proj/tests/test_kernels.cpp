#include "doctest.h"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <stdexcept>

#include "mdce/circuit.hpp"
#include "mdce/constants.hpp"
#include "mdce/kernels.hpp"

using namespace mdce;
using constants::two_pi;

namespace {

const double kW146 = two_pi * 14.6e9;

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof(double)) == 0; }

}  // namespace

TEST_SUITE("kernels") {

TEST_CASE("for_each_index visits every index once") {
  for (auto exec : {Execution::serial, Execution::parallel}) {
    for (std::size_t count : {0u, 1u, 7u, 1000u}) {
      std::vector<std::atomic<int>> hits(count);
      for_each_index(count, exec, [&](std::size_t i) { hits[i]++; });
      for (const auto& h : hits) CHECK(h.load() == 1);
    }
  }
}

TEST_CASE("for_each_index rethrows the lowest failing index") {
  for (auto exec : {Execution::serial, Execution::parallel}) {
    try {
      for_each_index(200, exec, [](std::size_t i) {
        if (i % 37 == 11) throw std::runtime_error(std::to_string(i));
      });
      FAIL("expected an exception");
    } catch (const std::runtime_error& e) {
      CHECK(std::string(e.what()) == "11");
    }
  }
}

TEST_CASE("parallel spectrum is bitwise identical to the serial reference") {
  const CircuitParams c{};
  for (auto kind : {TrajectoryKind::sinusoidal_acceleration, TrajectoryKind::alternating_uniform}) {
    const TrajectoryParams p{kind, solve_acceleration_parameter(kind, 20e18, kW146, c.v), kW146, c.v};
    const auto biased = bias_for_modulation_depth(p, c);
    const auto d = trajectory_to_drive(p, biased, 10);
    std::vector<double> omegas;
    for (int i = 1; i <= 2001; ++i) omegas.push_back(3.0 * kW146 * i / 2002.0);
    for (double T : {0.0, 0.025}) {
      const auto serial = spectrum_serial(omegas, d, biased, {T});
      const auto parallel = spectrum_parallel(omegas, d, biased, {T});
      std::vector<double> kernel_serial(omegas.size());
      spectrum_kernel(omegas, d, biased, {T}, kernel_serial, Execution::serial);
      REQUIRE(serial.size() == parallel.size());
      bool identical = true;
      for (std::size_t i = 0; i < serial.size(); ++i)
        identical = identical && same_bits(serial[i], parallel[i]) && same_bits(serial[i], kernel_serial[i]);
      CHECK(identical);
    }
  }
  std::vector<double> omegas(3, 1.0), wrong(2);
  CHECK_THROWS_AS(spectrum_kernel(omegas, DriveSpectrum{1.0, {}, {}, 1.0}, c, {0.0}, wrong, Execution::serial),
                  std::invalid_argument);
}

TEST_CASE("sampled worldlines are subluminal and agree across execution paths") {
  const CircuitParams c{};
  for (auto kind : {TrajectoryKind::sinusoidal_motion, TrajectoryKind::sinusoidal_acceleration,
                    TrajectoryKind::alternating_uniform}) {
    for (double abar : {1e17, 9.054e17, 1.2e19}) {
      for (double f : {5e9, 18e9, 28e9}) {
        const double w = two_pi * f;
        TrajectoryParams p{kind, 0.0, w, c.v};
        try {
          p.A = solve_acceleration_parameter(kind, abar, w, c.v);
        } catch (const ConstraintViolation&) {
          CHECK(kind == TrajectoryKind::sinusoidal_motion);
          continue;
        }
        const auto serial = sample_period(p, 512, Execution::serial);
        const auto parallel = sample_period(p, 512, Execution::parallel);
        REQUIRE(serial.size() == 512);
        bool identical = true;
        double fastest = 0.0;
        for (std::size_t i = 0; i < serial.size(); ++i) {
          identical = identical && same_bits(serial[i].z, parallel[i].z) && same_bits(serial[i].tau, parallel[i].tau) &&
                      same_bits(serial[i].alpha_dir, parallel[i].alpha_dir);
          fastest = std::max(fastest, std::abs(velocity(p, serial[i].t)));
        }
        CAPTURE(to_string(kind));
        CAPTURE(abar);
        CAPTURE(f);
        CHECK(identical);
        CHECK(fastest < c.v);
        CHECK(serial.front().t == 0.0);
        CHECK(serial.back().t < p.period());
      }
    }
  }
  CHECK_THROWS_AS(sample_period(TrajectoryParams{TrajectoryKind::alternating_uniform, 1e18, kW146, c.v}, 1,
                                Execution::serial),
                  std::invalid_argument);
}

TEST_CASE("thread configuration from the environment") {
  const char* saved = std::getenv("MDCE_THREADS");
  const std::string restore = saved ? saved : "";
  ::setenv("MDCE_THREADS", "abc", 1);
  CHECK_THROWS_AS(configure_threads_from_env(), std::invalid_argument);
  ::setenv("MDCE_THREADS", "-2", 1);
  CHECK_THROWS_AS(configure_threads_from_env(), std::invalid_argument);
  ::setenv("MDCE_THREADS", "0", 1);
  CHECK(configure_threads_from_env() >= 1);
  if (saved) {
    ::setenv("MDCE_THREADS", restore.c_str(), 1);
    CHECK(configure_threads_from_env() >= 1);
  } else {
    ::unsetenv("MDCE_THREADS");
  }
  CHECK(max_threads() >= 1);
}

}  // TEST_SUITE
