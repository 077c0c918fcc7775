#include "mdce/dataset_io.hpp"

#include <algorithm>
#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace mdce::io {

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, sep)) out.push_back(field);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

double parse_double(const std::string& text, int line) {
  errno = 0;
  char* end = nullptr;
  const double x = std::strtod(text.c_str(), &end);
  if (text.empty() || end != text.c_str() + text.size() || errno == ERANGE)
    throw ParseError(line, "not a number: '" + text + "'");
  return x;
}

void write_metadata(std::ostream& out, const Metadata& meta) {
  for (const auto& [k, v] : meta) out << "# " << k << '=' << v << '\n';
}

/// Reads the format tag and `# key=value` lines; returns the column header.
std::string read_preamble(std::istream& in, Metadata& meta, int& line_no) {
  std::string line;
  if (!std::getline(in, line) || line != kFormatTag) throw ParseError(1, "missing '# mirror-dce v1' header");
  line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.rfind("# ", 0) != 0) return line;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError(line_no, "metadata line without '='");
    meta.emplace_back(line.substr(2, eq - 2), line.substr(eq + 1));
  }
  throw ParseError(line_no, "missing column header");
}

std::optional<std::string> lookup(const Metadata& meta, std::string_view key) {
  for (const auto& [k, v] : meta)
    if (k == key) return v;
  return std::nullopt;
}

}  // namespace

ParseError::ParseError(int line_, const std::string& message)
    : std::runtime_error("line " + std::to_string(line_) + ": " + message), line(line_) {}

std::string format_double(double x) {
  char buffer[40];
  std::snprintf(buffer, sizeof buffer, "%.17g", x);
  return buffer;
}

void write_spectrum_csv(std::ostream& out, const SpectrumDataset& ds) {
  out << kFormatTag << '\n';
  write_metadata(out, ds.metadata);
  out << to_string(ds.axis) << ",n_out\n";
  for (const auto& p : ds.points) out << format_double(p.x) << ',' << format_double(p.n_out) << '\n';
}

SpectrumDataset read_spectrum_csv(std::istream& in) {
  SpectrumDataset ds;
  int line_no = 0;
  const auto header = split(read_preamble(in, ds.metadata, line_no), ',');
  if (header.size() != 2 || header[1] != "n_out") throw ParseError(line_no, "expected columns '<axis>,n_out'");
  ds.axis = parse_sweep_axis(header[0]);
  if (auto t = lookup(ds.metadata, "trajectory")) ds.trajectory = *t;
  if (auto T = lookup(ds.metadata, "temperature_K")) ds.temperature = parse_double(*T, line_no);
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    const auto f = split(line, ',');
    if (f.size() != 2) throw ParseError(line_no, "expected 2 fields");
    ds.points.push_back({parse_double(f[0], line_no), parse_double(f[1], line_no)});
  }
  return ds;
}

void write_spectrum_long_csv(std::ostream& out, std::span<const SpectrumDataset> curves) {
  if (curves.empty()) throw std::invalid_argument("write_spectrum_long_csv: no curves");
  const SweepAxis axis = curves.front().axis;
  for (const auto& c : curves)
    if (c.axis != axis) throw std::invalid_argument("write_spectrum_long_csv: curves differ in axis");

  // Position k is shared when every curve has the same k-th entry; other
  // positions are written per curve, which keeps each curve's order on reading.
  std::size_t longest = 0;
  for (const auto& c : curves) longest = std::max(longest, c.metadata.size());
  out << kFormatTag << '\n';
  out << "# curves=" << curves.size() << '\n';
  for (std::size_t k = 0; k < longest; ++k) {
    bool shared = true;
    for (const auto& c : curves) {
      if (k >= c.metadata.size() || c.metadata[k] != curves.front().metadata[k]) {
        shared = false;
        break;
      }
    }
    if (shared) {
      const auto& [key, value] = curves.front().metadata[k];
      out << "# " << key << '=' << value << '\n';
      continue;
    }
    for (std::size_t j = 0; j < curves.size(); ++j) {
      if (k >= curves[j].metadata.size()) continue;
      const auto& [key, value] = curves[j].metadata[k];
      out << "# curve" << j << '.' << key << '=' << value << '\n';
    }
  }
  out << to_string(axis) << ",n_out,trajectory,temperature_K\n";
  for (const auto& c : curves) {
    const std::string T = format_double(c.temperature);
    for (const auto& p : c.points)
      out << format_double(p.x) << ',' << format_double(p.n_out) << ',' << c.trajectory << ',' << T << '\n';
  }
}

std::vector<SpectrumDataset> read_spectrum_long_csv(std::istream& in) {
  Metadata meta;
  int line_no = 0;
  const auto header = split(read_preamble(in, meta, line_no), ',');
  if (header.size() != 4 || header[1] != "n_out" || header[2] != "trajectory" || header[3] != "temperature_K")
    throw ParseError(line_no, "expected columns '<axis>,n_out,trajectory,temperature_K'");
  const SweepAxis axis = parse_sweep_axis(header[0]);
  const auto count_text = lookup(meta, "curves");
  if (!count_text) throw ParseError(line_no, "missing curves= metadata");
  const auto count = static_cast<std::size_t>(parse_double(*count_text, line_no));

  std::vector<SpectrumDataset> curves(count);
  for (const auto& [k, v] : meta) {
    if (k == "curves") continue;
    const auto dot = k.find('.');
    if (k.rfind("curve", 0) == 0 && dot != std::string::npos && dot > 5) {
      const auto j = static_cast<std::size_t>(parse_double(k.substr(5, dot - 5), line_no));
      if (j >= count) throw ParseError(line_no, "curve index out of range in '" + k + "'");
      curves[j].metadata.emplace_back(k.substr(dot + 1), v);
      continue;
    }
    for (auto& c : curves) c.metadata.emplace_back(k, v);
  }
  for (auto& c : curves) {
    c.axis = axis;
    if (auto t = lookup(c.metadata, "trajectory")) c.trajectory = *t;
    if (auto T = lookup(c.metadata, "temperature_K")) c.temperature = parse_double(*T, line_no);
  }

  std::string line;
  std::size_t current = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto f = split(line, ',');
    if (f.size() != 4) throw ParseError(line_no, "expected 4 fields");
    const double T = parse_double(f[3], line_no);
    while (current < count && (curves[current].trajectory != f[2] || curves[current].temperature != T)) ++current;
    if (current == count) throw ParseError(line_no, "row does not match any declared curve");
    curves[current].points.push_back({parse_double(f[0], line_no), parse_double(f[1], line_no)});
  }
  return curves;
}

void write_worldline_csv(std::ostream& out, std::span<const WorldlineCurve> curves, const Metadata& meta) {
  out << kFormatTag << '\n';
  write_metadata(out, meta);
  for (const auto& c : curves) {
    const std::string k(to_string(c.params.kind));
    out << "# " << k << ".A=" << format_double(c.params.A) << '\n';
    out << "# " << k << ".abar=" << format_double(average_acceleration(c.params)) << '\n';
  }
  out << "t,tau,z,alpha_dir,trajectory\n";
  for (const auto& c : curves) {
    const std::string k(to_string(c.params.kind));
    for (const auto& s : c.samples)
      out << format_double(s.t) << ',' << format_double(s.tau) << ',' << format_double(s.z) << ','
          << format_double(s.alpha_dir) << ',' << k << '\n';
  }
}

void write_fourier_csv(std::ostream& out, std::span<const FourierCurve> curves, const Metadata& meta) {
  out << kFormatTag << '\n';
  write_metadata(out, meta);
  for (const auto& c : curves) {
    const std::string k(to_string(c.params.kind));
    out << "# " << k << ".A=" << format_double(c.params.A) << '\n';
    out << "# " << k << ".abar=" << format_double(average_acceleration(c.params)) << '\n';
    out << "# " << k << ".EJ0_ratio=" << format_double(c.circuit.EJ0_ratio) << '\n';
    out << "# " << k << ".L_eff0_m=" << format_double(effective_length(c.circuit)) << '\n';
  }
  out << "n,a_n,b_n,magnitude,trajectory\n";
  for (const auto& c : curves) {
    const std::string k(to_string(c.params.kind));
    out << "0," << format_double(c.drive.a0) << ",0," << format_double(std::abs(c.drive.a0)) << ',' << k << '\n';
    const auto mags = c.drive.magnitudes();
    for (int n = 1; n <= c.drive.n_max(); ++n) {
      const auto i = static_cast<std::size_t>(n - 1);
      out << n << ',' << format_double(c.drive.a[i]) << ',' << format_double(c.drive.b[i]) << ','
          << format_double(mags[i]) << ',' << k << '\n';
    }
  }
}

void write_file(const std::string& path, std::string_view content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  const fs::path tmp = target.string() + ".partial";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot open '" + tmp.string() + "' for writing");
    f.write(content.data(), static_cast<std::streamsize>(content.size()));
    f.close();
    if (!f) {
      std::error_code ec;
      fs::remove(tmp, ec);
      throw std::runtime_error("failed writing '" + tmp.string() + "'");
    }
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    std::error_code ignored;
    fs::remove(tmp, ignored);
    throw std::runtime_error("cannot replace '" + target.string() + "': " + ec.message());
  }
}

}  // namespace mdce::io
