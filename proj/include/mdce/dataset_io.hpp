#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mdce/experiments.hpp"

namespace mdce::io {

inline constexpr std::string_view kFormatTag = "# mirror-dce v1";

/// 17 significant digits; parses back to the same double.
std::string format_double(double x);

class ParseError : public std::runtime_error {
 public:
  ParseError(int line, const std::string& message);
  int line;
};

/// One curve: metadata block, then columns `<axis>,n_out`.
void write_spectrum_csv(std::ostream& out, const SpectrumDataset& ds);
SpectrumDataset read_spectrum_csv(std::istream& in);

/// Several curves sharing an axis in one table with columns
/// `<axis>,n_out,trajectory,temperature_K`. Metadata shared by all curves is
/// written once; keys that differ are prefixed `curve<j>.`.
void write_spectrum_long_csv(std::ostream& out, std::span<const SpectrumDataset> curves);
std::vector<SpectrumDataset> read_spectrum_long_csv(std::istream& in);

/// Columns `t,tau,z,alpha_dir,trajectory` (s, s, m, m/s²).
void write_worldline_csv(std::ostream& out, std::span<const WorldlineCurve> curves, const Metadata& meta = {});

/// Columns `n,a_n,b_n,magnitude,trajectory`; row n = 0 carries a0 (joules).
void write_fourier_csv(std::ostream& out, std::span<const FourierCurve> curves, const Metadata& meta = {});

/// Writes to `path` via a temporary file in the same directory, so a failed
/// write never leaves a truncated file behind.
void write_file(const std::string& path, std::string_view content);

}  // namespace mdce::io
