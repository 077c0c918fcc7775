#include "mdce/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "mdce/dataset_io.hpp"

namespace mdce::cli {

namespace {

using constants::two_pi;
using io::format_double;

constexpr double kDefaultAbarTarget = 20e18;

std::string fmt(const char* spec, double x) {
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, spec, x);
  return buffer;
}

std::string join_path(const std::string& dir, const std::string& name) {
  return (std::filesystem::path(dir) / name).string();
}

void add_circuit_metadata(Metadata& m, const CircuitParams& c) {
  m.emplace_back("v", format_double(c.v));
  m.emplace_back("C_J", format_double(c.C_J));
  m.emplace_back("I_c", format_double(c.I_c));
  m.emplace_back("Z0", format_double(c.Z0));
  m.emplace_back("omega_s", format_double(c.omega_s));
  m.emplace_back("f_s_Hz", format_double(c.omega_s / two_pi));
}

void add_trajectory_metadata(Metadata& m, const TrajectoryParams& p) {
  m.emplace_back("trajectory", std::string(to_string(p.kind)));
  m.emplace_back("A", format_double(p.A));
  m.emplace_back("abar", format_double(average_acceleration(p)));
  m.emplace_back("omega_d", format_double(p.omega_d));
  m.emplace_back("f_d_Hz", format_double(p.omega_d / two_pi));
}

void add_report(Metadata& m, const ValidityReport& report, std::vector<std::string>& warnings) {
  for (const auto& check : report.checks) {
    if (check.status == CheckStatus::ok) continue;
    m.emplace_back("validity." + check.name + "." + std::string(to_string(check.status)), check.detail);
    if (check.status == CheckStatus::warn) warnings.push_back(check.name + ": " + check.detail);
  }
}

void require_pass(const ValidityReport& report) {
  if (report.passed()) return;
  std::string message = "configuration failed validity checks:";
  for (const auto& check : report.checks)
    if (check.status == CheckStatus::fail) message += "\n  " + check.name + ": " + check.detail;
  throw ValidationFailure(message);
}

std::string output_or(const RunConfig& cfg, const std::string& fallback) {
  return cfg.output.path.value_or(fallback);
}

template <class Writer>
std::string capture(Writer&& write) {
  std::ostringstream ss;
  write(ss);
  return ss.str();
}

struct Single {
  TrajectoryParams params;
  CircuitParams circuit;
  DriveSpectrum drive;
};

Single resolve_single(const RunConfig& cfg) {
  Single s;
  s.params = cfg.resolve_trajectory();
  s.circuit = cfg.resolve_circuit(s.params);
  s.drive = trajectory_to_drive(s.params, s.circuit, cfg.physics.n_max, cfg.physics.samples);
  return s;
}

// ---------------------------------------------------------------------------

Rendered render_traj(const RunConfig& cfg, Execution exec) {
  const auto p = cfg.resolve_trajectory();
  WorldlineCurve curve{p, sample_period(p, cfg.sweep.points, exec)};
  Metadata m{{"command", "traj"}, {"points", std::to_string(cfg.sweep.points)}};
  add_trajectory_metadata(m, p);
  Rendered r;
  r.files.push_back({output_or(cfg, "worldline.csv"),
                     capture([&](std::ostream& o) { io::write_worldline_csv(o, std::span(&curve, 1), m); })});
  return r;
}

Rendered render_drive(const RunConfig& cfg) {
  const auto s = resolve_single(cfg);
  Rendered r;
  Metadata m{{"command", "drive"}};
  add_trajectory_metadata(m, s.params);
  add_circuit_metadata(m, s.circuit);
  m.emplace_back("EJ0_ratio", format_double(s.circuit.EJ0_ratio));
  m.emplace_back("n_max", std::to_string(cfg.physics.n_max));
  m.emplace_back("fourier_samples", std::to_string(cfg.physics.samples));
  const auto report = validate(s.drive, s.params, s.circuit, {}, cfg.physics.T);
  require_pass(report);
  add_report(m, report, r.warnings);
  FourierCurve curve{s.params, s.circuit, s.drive};
  r.files.push_back({output_or(cfg, "drive.csv"),
                     capture([&](std::ostream& o) { io::write_fourier_csv(o, std::span(&curve, 1), m); })});
  return r;
}

Rendered render_flux(const RunConfig& cfg) {
  const auto s = resolve_single(cfg);
  Rendered r;
  Metadata unused;
  const auto report = validate(s.drive, s.params, s.circuit, {}, cfg.physics.T);
  require_pass(report);
  add_report(unused, report, r.warnings);
  const auto samples = flux_waveform(s.drive, s.circuit, cfg.flux.samples_per_period, cfg.flux.periods);
  r.files.push_back({output_or(cfg, "flux.csv"), capture([&](std::ostream& o) { write_flux_csv(o, samples); })});
  return r;
}

Rendered render_spectrum(const RunConfig& cfg, Execution exec) {
  if (cfg.sweep.axis && *cfg.sweep.axis != SweepAxis::omega)
    throw ConfigError(0, "sweep.axis", "spectrum runs over omega; use the sweep command for other axes");
  const auto s = resolve_single(cfg);
  const bool explicit_range = cfg.sweep.min || cfg.sweep.max;
  if (explicit_range && !(cfg.sweep.min && cfg.sweep.max))
    throw ConfigError(0, "sweep", "set both min and max");
  const bool relative = explicit_range ? cfg.sweep.relative : true;
  Grid grid{explicit_range ? *cfg.sweep.min : 0.0, explicit_range ? *cfg.sweep.max : 3.0, cfg.sweep.points,
            cfg.sweep.open.value_or(relative)};
  auto omegas = grid.values();
  for (auto& w : omegas) w *= relative ? s.params.omega_d : two_pi;
  if (omegas.front() < 0.0) throw ConfigError(0, "sweep.min", "frequencies must be >= 0");

  Rendered r;
  const auto report = validate(s.drive, s.params, s.circuit, omegas, cfg.physics.T);
  require_pass(report);
  std::vector<double> n_out(omegas.size());
  spectrum_kernel(omegas, s.drive, s.circuit, ThermalInput{cfg.physics.T}, n_out, exec);

  SpectrumDataset ds;
  ds.axis = SweepAxis::omega;
  ds.trajectory = std::string(to_string(s.params.kind));
  ds.temperature = cfg.physics.T;
  for (std::size_t i = 0; i < omegas.size(); ++i) ds.points.push_back({omegas[i], n_out[i]});
  auto& m = ds.metadata;
  m.emplace_back("command", "spectrum");
  m.emplace_back("axis", "omega");
  m.emplace_back("x_unit", "rad/s");
  add_trajectory_metadata(m, s.params);
  m.emplace_back("temperature_K", format_double(cfg.physics.T));
  add_circuit_metadata(m, s.circuit);
  m.emplace_back("EJ0_ratio", format_double(s.circuit.EJ0_ratio));
  m.emplace_back("L_eff0_m", format_double(effective_length(s.circuit)));
  m.emplace_back("n_max", std::to_string(cfg.physics.n_max));
  m.emplace_back("fourier_samples", std::to_string(cfg.physics.samples));
  m.emplace_back("grid_min", format_double(grid.min));
  m.emplace_back("grid_max", format_double(grid.max));
  m.emplace_back("grid_points", std::to_string(grid.points));
  m.emplace_back("grid_open", grid.open ? "1" : "0");
  m.emplace_back("grid_relative", relative ? "1" : "0");
  add_report(m, report, r.warnings);
  r.files.push_back({output_or(cfg, "spectrum.csv"), capture([&](std::ostream& o) { io::write_spectrum_csv(o, ds); })});
  return r;
}

std::string temperature_label(double T) { return fmt("%g", T); }

/// One file per curve (split) or per panel (long).
void emit_sweep(const SweepResult& result, OutputFormat format, const std::string& dir, const std::string& prefix,
                Rendered& r) {
  const std::size_t per_panel = result.spec.trajectories.size() * result.spec.temperatures.size();
  for (std::size_t panel = 0; panel < result.spec.panels.size(); ++panel) {
    const std::string stem = prefix + "_p" + std::to_string(panel);
    const auto begin = result.curves.begin() + static_cast<std::ptrdiff_t>(panel * per_panel);
    if (format == OutputFormat::long_table) {
      const std::span<const SpectrumDataset> curves(&*begin, per_panel);
      r.files.push_back({join_path(dir, stem + ".csv"),
                         capture([&](std::ostream& o) { io::write_spectrum_long_csv(o, curves); })});
      continue;
    }
    for (std::size_t j = 0; j < per_panel; ++j) {
      const auto& ds = *(begin + static_cast<std::ptrdiff_t>(j));
      r.files.push_back({join_path(dir, stem + "_" + ds.trajectory + "_T" + temperature_label(ds.temperature) + ".csv"),
                         capture([&](std::ostream& o) { io::write_spectrum_csv(o, ds); })});
    }
  }
  for (const auto& ds : result.curves) {
    const auto failed = ds.meta("points_failed");
    if (failed && *failed != "0")
      r.warnings.push_back(ds.trajectory + " T=" + temperature_label(ds.temperature) + ": " + *failed +
                           " grid points failed (see failure.* metadata)");
  }
}

SweepSpec sweep_from_config(const RunConfig& cfg) {
  const auto& b = cfg.sweep;
  if (!b.axis) throw ConfigError(0, "sweep.axis", "required");
  if (!b.min || !b.max) throw ConfigError(0, "sweep", "min and max are required");
  SweepSpec s;
  s.axis = *b.axis;
  s.figure = s.axis == SweepAxis::omega ? FigureId::nout_vs_w
             : s.axis == SweepAxis::omega_d ? FigureId::nout_vs_wd
                                            : FigureId::nout_vs_abar;
  s.grid_relative = s.axis == SweepAxis::omega && b.relative;
  if (b.relative && s.axis != SweepAxis::omega) throw ConfigError(0, "sweep.relative", "only valid for axis omega");
  const double scale = s.axis == SweepAxis::abar || s.grid_relative ? 1.0 : two_pi;
  s.grid = {*b.min * scale, *b.max * scale, b.points, b.open.value_or(s.grid_relative)};
  if (b.fixed.empty()) {
    if (s.axis == SweepAxis::omega && cfg.trajectory.f_d) {
      s.panels = {two_pi * *cfg.trajectory.f_d};
    } else {
      throw ConfigError(0, "sweep.fixed", "required (panel frequencies in Hz)");
    }
  } else {
    for (double f : b.fixed) s.panels.push_back(two_pi * f);
  }
  if (!b.trajectories.empty()) {
    s.trajectories = b.trajectories;
  } else if (cfg.trajectory.kind) {
    s.trajectories = {*cfg.trajectory.kind};
  } else {
    throw ConfigError(0, "sweep.trajectories", "required when trajectory.kind is not set");
  }
  s.temperatures = b.temperatures.empty() ? std::vector<double>{cfg.physics.T} : b.temperatures;
  if (s.axis == SweepAxis::abar) {
    if (!cfg.trajectory.f_d) throw ConfigError(0, "trajectory.f_d", "required for axis abar");
    s.omega_d = two_pi * *cfg.trajectory.f_d;
  } else if (cfg.trajectory.abar_target) {
    s.acceleration.abar = *cfg.trajectory.abar_target;
  } else if (cfg.trajectory.A) {
    if (!cfg.trajectory.kind) throw ConfigError(0, "trajectory.kind", "required with trajectory.A");
    s.acceleration.reference_kind = *cfg.trajectory.kind;
    s.acceleration.reference_A = *cfg.trajectory.A;
  } else {
    throw ConfigError(0, "trajectory", "set A or abar_target");
  }
  s.modulation_depth = cfg.physics.modulation_depth.value_or(0.0);
  s.n_max = cfg.physics.n_max;
  s.samples = cfg.physics.samples;
  try {
    s.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(0, "sweep", e.what());
  }
  return s;
}

Rendered render_sweep(const RunConfig& cfg, Execution exec) {
  const auto spec = sweep_from_config(cfg);
  Rendered r;
  emit_sweep(run_sweep(spec, cfg.circuit, exec), cfg.output.format, output_or(cfg, "out"), "sweep", r);
  return r;
}

// ---------------------------------------------------------------------------

std::string row(const std::string& label, const std::vector<std::string>& cells) {
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%-18s", label.c_str());
  std::string line = buffer;
  for (const auto& cell : cells) {
    std::snprintf(buffer, sizeof buffer, " | %-30s", cell.c_str());
    line += buffer;
  }
  while (!line.empty() && line.back() == ' ') line.pop_back();
  return line + "\n";
}

std::string parameter_table(const Selection& sel, const CircuitParams& c, double depth) {
  std::vector<std::string> kinds, abar, A, fd, ej0, a1, ej, ic, cj, v, z0, fs;
  const std::string a1_text = "(a0/2) * " + fmt("%.6g", depth);
  for (const auto& t : sel.trajectories) {
    const char* symbol = t.params.kind == TrajectoryKind::sinusoidal_motion ? "R=" :
                         t.params.kind == TrajectoryKind::sinusoidal_acceleration ? "alpha=" : "a=";
    kinds.emplace_back(to_string(t.params.kind));
    abar.push_back(fmt("%.6g m/s^2", t.abar));
    A.push_back(t.params.kind == TrajectoryKind::sinusoidal_motion
                    ? symbol + fmt("%.6g mm", t.params.sm_amplitude() * 1e3)
                    : symbol + fmt("%.6g m/s^2", t.params.A));
    fd.push_back(fmt("%.6g GHz", sel.omega_d / two_pi / 1e9));
    ej0.push_back(fmt("%.6g E_J", t.EJ0_ratio));
    a1.push_back(a1_text);
    ej.push_back("I_c (phi0/2pi) = " + fmt("%.4g J", c.josephson_energy()));
    ic.push_back(fmt("%.6g uA", c.I_c * 1e6));
    cj.push_back(fmt("%.6g fF", c.C_J * 1e15));
    v.push_back(fmt("%.6g c", c.v / constants::c));
    z0.push_back(fmt("%.6g Ohm", c.Z0));
    fs.push_back(fmt("%.6g GHz", c.omega_s / two_pi / 1e9));
  }
  std::string out = row("", kinds);
  out += row("abar", abar);
  out += row("A", A);
  out += row("omega_d/2pi", fd);
  out += row("E_J0 = a0/2", ej0);
  out += row("a_1", a1);
  out += row("E_J", ej);
  out += row("I_c", ic);
  out += row("C_J", cj);
  out += row("v", v);
  out += row("Z0", z0);
  out += row("omega_s/2pi", fs);
  if (sel.sm_amplitude_range) {
    out += "SM amplitude range: R in [" + fmt("%.6g", sel.sm_amplitude_range->first * 1e3) + ", " +
           fmt("%.6g", sel.sm_amplitude_range->second * 1e3) + "] mm for omega_d/2pi in [" +
           fmt("%.6g", sel.omega_d / two_pi / 1e9) + ", " + fmt("%.6g", sel.omega_d_upper / two_pi / 1e9) +
           "] GHz\n";
  }
  return out;
}

Rendered render_params(const RunConfig& cfg) {
  if (cfg.trajectory.A) throw ConfigError(0, "trajectory.A", "params selects A; give abar_target instead");
  SelectionCriteria crit;
  crit.abar_target = cfg.trajectory.abar_target.value_or(kDefaultAbarTarget);
  if (cfg.physics.modulation_depth) crit.modulation_depth = *cfg.physics.modulation_depth;
  Rendered r;
  if (cfg.trajectory.kind) {
    r.text = parameter_table(select_parameters(*cfg.trajectory.kind, crit, cfg.circuit), cfg.circuit,
                             crit.modulation_depth);
  } else {
    const TrajectoryKind shared[] = {TrajectoryKind::sinusoidal_acceleration, TrajectoryKind::alternating_uniform};
    r.text = parameter_table(select_parameters(shared, crit, cfg.circuit), cfg.circuit, crit.modulation_depth);
    r.text += "\n";
    try {
      r.text += parameter_table(select_parameters(TrajectoryKind::sinusoidal_motion, crit, cfg.circuit), cfg.circuit,
                                crit.modulation_depth);
    } catch (const ConstraintViolation& e) {
      r.text += std::string("SM: ") + e.what() + "\n";
    }
  }
  if (cfg.output.path) r.files.push_back({*cfg.output.path, r.text});
  return r;
}

Rendered render_reproduce(const RunConfig& cfg, Execution exec) {
  if (!cfg.figure) throw ConfigError(0, "figure", "reproduce needs a figure (fig1..fig8)");
  const FigureId fig = *cfg.figure;
  const std::string dir = output_or(cfg, "out");
  const std::string prefix = "fig" + std::to_string(figure_number(fig));
  const TrajectoryKind all[] = {TrajectoryKind::sinusoidal_motion, TrajectoryKind::sinusoidal_acceleration,
                                TrajectoryKind::alternating_uniform};
  Rendered r;
  if (fig == FigureId::worldlines) {
    const double abar = 1.2e19, omega_d = two_pi * 28e9;
    const auto curves = worldline_dataset(all, abar, omega_d, cfg.circuit.v, cfg.sweep.points, exec);
    const Metadata m{{"figure", "worldlines"}, {"abar", format_double(abar)}, {"omega_d", format_double(omega_d)},
                     {"f_d_Hz", format_double(omega_d / two_pi)}, {"v", format_double(cfg.circuit.v)},
                     {"points", std::to_string(cfg.sweep.points)}};
    r.files.push_back({join_path(dir, prefix + ".csv"),
                       capture([&](std::ostream& o) { io::write_worldline_csv(o, curves, m); })});
    return r;
  }
  if (fig == FigureId::fourier) {
    const double abar = kDefaultAbarTarget, omega_d = two_pi * 14.6e9;
    const int n_max = 10;
    const double depth = cfg.physics.modulation_depth.value_or(0.25);
    const auto curves = fourier_dataset(std::span(all + 1, 2), abar, omega_d, cfg.circuit, n_max, depth);
    Metadata m{{"figure", "fourier"}, {"abar", format_double(abar)}, {"omega_d", format_double(omega_d)},
               {"f_d_Hz", format_double(omega_d / two_pi)}, {"modulation_depth", format_double(depth)},
               {"n_max", std::to_string(n_max)}, {"fourier_samples", std::to_string(kDefaultFourierSamples)}};
    add_circuit_metadata(m, cfg.circuit);
    r.files.push_back({join_path(dir, prefix + ".csv"),
                       capture([&](std::ostream& o) { io::write_fourier_csv(o, curves, m); })});
    return r;
  }
  SweepSpec spec = preset_sweep(fig);
  spec.grid.points = cfg.sweep.points;
  emit_sweep(run_sweep(spec, cfg.circuit, exec), cfg.output.format, dir, prefix, r);
  return r;
}

}  // namespace

Rendered render(const RunConfig& cfg, Execution exec) {
  cfg.validate();
  if (!cfg.command) throw ConfigError(0, "command", "required");
  switch (*cfg.command) {
    case Command::traj: return render_traj(cfg, exec);
    case Command::drive: return render_drive(cfg);
    case Command::flux: return render_flux(cfg);
    case Command::spectrum: return render_spectrum(cfg, exec);
    case Command::sweep: return render_sweep(cfg, exec);
    case Command::params: return render_params(cfg);
    case Command::reproduce: return render_reproduce(cfg, exec);
  }
  throw ConfigError(0, "command", "unhandled command");
}

void write_artifacts(const std::vector<Artifact>& files) {
  std::vector<std::string> written;
  try {
    for (const auto& f : files) {
      io::write_file(f.path, f.content);
      written.push_back(f.path);
    }
  } catch (...) {
    for (const auto& path : written) {
      std::error_code ec;
      std::filesystem::remove(path, ec);
    }
    throw;
  }
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Dynamical Casimir effect simulator for relativistic mirror trajectories", "mirror-dce"};
  std::string command, figure, config_path, out_path, kind, format;
  double abar = 0.0, A = 0.0, fd = 0.0, T = 0.0;
  int n_max = 0, points = 0, periods = 0;
  app.add_option("command", command, "traj | drive | flux | spectrum | sweep | params | reproduce")->required();
  app.add_option("figure", figure, "figure for reproduce: fig1..fig8");
  auto* o_config = app.add_option("--config", config_path, "YAML configuration file");
  auto* o_out = app.add_option("--out", out_path, "output file, or directory for sweep/reproduce ('-' = stdout)");
  auto* o_kind = app.add_option("--kind", kind, "trajectory: sm | sa | aua");
  auto* o_abar = app.add_option("--abar", abar, "average proper acceleration target [m/s^2]");
  auto* o_A = app.add_option("--A", A, "acceleration parameter [m/s^2]");
  auto* o_fd = app.add_option("--fd", fd, "driving frequency omega_d/2pi [Hz]");
  auto* o_T = app.add_option("--T", T, "bath temperature [K]");
  auto* o_nmax = app.add_option("--nmax", n_max, "number of drive harmonics");
  auto* o_points = app.add_option("--points", points, "grid points (sweeps, worldlines)");
  auto* o_periods = app.add_option("--periods", periods, "periods in the flux waveform");
  auto* o_format = app.add_option("--format", format, "sweep output: split | long");
  o_abar->excludes(o_A);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  RunConfig cfg;
  try {
    configure_threads_from_env();
    if (o_config->count() > 0) cfg = load_config(config_path);
    cfg.command = parse_command(command);
    if (!figure.empty()) {
      if (*cfg.command != Command::reproduce) throw ConfigError(0, "figure", "only valid with reproduce");
      cfg.figure = parse_figure(figure);
    }
    if (o_kind->count() > 0) cfg.trajectory.kind = parse_trajectory_kind(kind);
    if (o_abar->count() > 0) {
      cfg.trajectory.abar_target = abar;
      cfg.trajectory.A.reset();
    }
    if (o_A->count() > 0) {
      cfg.trajectory.A = A;
      cfg.trajectory.abar_target.reset();
    }
    if (o_fd->count() > 0) cfg.trajectory.f_d = fd;
    if (o_T->count() > 0) cfg.physics.T = T;
    if (o_nmax->count() > 0) cfg.physics.n_max = n_max;
    if (o_points->count() > 0) cfg.sweep.points = points;
    if (o_periods->count() > 0) cfg.flux.periods = periods;
    if (o_format->count() > 0) cfg.output.format = parse_output_format(format);
    if (o_out->count() > 0) cfg.output.path = out_path;
    cfg.validate();
  } catch (const std::exception& e) {
    err << "mirror-dce: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    const bool to_stdout = cfg.output.path && *cfg.output.path == "-";
    const Rendered r = render(cfg);
    for (const auto& w : r.warnings) err << "warning: " << w << '\n';
    if (to_stdout) {
      if (*cfg.command == Command::params) {
        out << r.text;
      } else {
        if (r.files.size() != 1) throw ConfigError(0, "output.path", "'-' needs a single-file command");
        out << r.files.front().content;
      }
      return kExitOk;
    }
    out << r.text;
    write_artifacts(r.files);
    for (const auto& f : r.files) err << "wrote " << f.path << '\n';
    return kExitOk;
  } catch (const ConfigError& e) {
    err << "mirror-dce: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "mirror-dce: " << e.what() << '\n';
    return kExitFailure;
  }
}

}  // namespace mdce::cli
