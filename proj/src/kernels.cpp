#include "mdce/kernels.hpp"

#include <cstdlib>
#include <exception>
#include <stdexcept>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace mdce {

void for_each_index(std::size_t count, Execution exec, const std::function<void(std::size_t)>& body) {
  if (exec == Execution::serial || count < 2) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::vector<std::exception_ptr> errors(count);
  const auto n = static_cast<long long>(count);
#pragma omp parallel for schedule(dynamic, 4)
  for (long long i = 0; i < n; ++i) {
    try {
      body(static_cast<std::size_t>(i));
    } catch (...) {
      errors[static_cast<std::size_t>(i)] = std::current_exception();
    }
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
}

int configure_threads_from_env() {
  const char* env = std::getenv("MDCE_THREADS");
  if (env == nullptr || *env == '\0') return max_threads();
  char* end = nullptr;
  const long requested = std::strtol(env, &end, 10);
  if (end == env || *end != '\0' || requested < 0 || requested > 4096)
    throw std::invalid_argument(std::string("MDCE_THREADS must be a non-negative integer (got '") + env + "')");
#ifdef _OPENMP
  if (requested > 0) omp_set_num_threads(static_cast<int>(requested));
#endif
  return max_threads();
}

int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

void spectrum_kernel(std::span<const double> omegas, const DriveSpectrum& d, const CircuitParams& c,
                     const ThermalInput& th, std::span<double> out, Execution exec) {
  if (out.size() != omegas.size()) throw std::invalid_argument("spectrum_kernel: output size mismatch");
  for_each_index(omegas.size(), exec, [&](std::size_t i) { out[i] = output_spectrum(omegas[i], d, c, th); });
}

std::vector<double> spectrum_serial(std::span<const double> omegas, const DriveSpectrum& d,
                                    const CircuitParams& c, const ThermalInput& th) {
  std::vector<double> out(omegas.size());
  for (std::size_t i = 0; i < omegas.size(); ++i) out[i] = output_spectrum(omegas[i], d, c, th);
  return out;
}

std::vector<double> spectrum_parallel(std::span<const double> omegas, const DriveSpectrum& d,
                                      const CircuitParams& c, const ThermalInput& th) {
  std::vector<double> out(omegas.size());
  spectrum_kernel(omegas, d, c, th, out, Execution::parallel);
  return out;
}

std::vector<WorldlineSample> sample_period(const TrajectoryParams& p, int points, Execution exec) {
  if (points < 2) throw std::invalid_argument("sample_period: need at least 2 points");
  p.validate();
  std::vector<WorldlineSample> out(static_cast<std::size_t>(points));
  const double period = p.period();
  for_each_index(out.size(), exec, [&](std::size_t i) {
    out[i] = sample_worldline(p, period * static_cast<double>(i) / points);
  });
  return out;
}

}  // namespace mdce
